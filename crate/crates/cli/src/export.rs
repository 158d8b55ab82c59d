//! Artifact files: measure CSV, JSON reports and rasters. Every file is
//! written to a temporary sibling and renamed into place.

use std::fmt::Write as _;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use polysemi_core::dynamics::{Atom, EmpiricalMeasure};
use polysemi_core::Complex64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::CliError;
use crate::raster::RasterImage;

pub const CSV_HEADER: &str = "re,im,weight";

fn unwritable(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Unwritable { path: path.to_path_buf(), message: e.to_string() }
}

/// Write `bytes` to `path` atomically.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(unwritable(path))?;
    tmp.write_all(bytes).map_err(unwritable(path))?;
    tmp.as_file().sync_all().map_err(unwritable(path))?;
    tmp.persist(path).map_err(|e| unwritable(path)(e.error))?;
    Ok(())
}

/// `x` to 17 significant digits in the style of C's `%.17g`: fixed
/// notation for decimal exponents in `[-4, 17)`, scientific otherwise,
/// trailing zeros trimmed. Seventeen digits always parse back exactly.
pub fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        trim_zeros(format!("{x:.*}", (16 - exp) as usize))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        let keep = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(keep);
    }
    s
}

/// One `re,im,weight` line per atom, floats as [`format_f64`].
pub fn measure_csv(mu: &EmpiricalMeasure) -> String {
    let mut out = String::with_capacity(64 * (mu.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for a in mu.atoms() {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_f64(a.location.re),
            format_f64(a.location.im),
            format_f64(a.weight)
        );
    }
    out
}

pub fn parse_measure_csv(text: &str) -> Result<EmpiricalMeasure, CliError> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(CliError::Config(format!("measure CSV must start with \"{CSV_HEADER}\"")));
    }
    let mut atoms = Vec::new();
    for (k, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| CliError::Config(format!("line {}: {e}", k + 2)))
        };
        if fields.len() != 3 {
            return Err(CliError::Config(format!("line {}: expected 3 fields", k + 2)));
        }
        atoms.push(Atom {
            location: Complex64::new(parse(fields[0])?, parse(fields[1])?),
            weight: parse(fields[2])?,
        });
    }
    EmpiricalMeasure::new(atoms).map_err(|e| CliError::Config(e.to_string()))
}

/// Pretty printing with floats written by [`format_f64`].
struct ReportFormatter(PrettyFormatter<'static>);

impl Formatter for ReportFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        let mut text = format_f64(value);
        if !text.contains(['.', 'e']) {
            text.push_str(".0");
        }
        writer.write_all(text.as_bytes())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with a trailing newline; keys follow struct field order and
/// non-finite floats become `null`.
pub fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut bytes, ReportFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report types serialize infallibly");
    bytes.push(b'\n');
    bytes
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    write_atomic(&path, &json_bytes(value))?;
    Ok(path)
}

pub fn write_raster(dir: &Path, name: &str, image: &RasterImage) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    write_atomic(&path, &image.encode())?;
    Ok(path)
}

pub fn write_measure(dir: &Path, name: &str, mu: &EmpiricalMeasure) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    write_atomic(&path, measure_csv(mu).as_bytes())?;
    Ok(path)
}
