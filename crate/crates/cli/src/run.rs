//! Subcommand dispatch.

use std::path::{Path, PathBuf};

use polysemi_core::dynamics::{default_base_point, iterate_pullback, julia_sample, SampleConfig};
use polysemi_core::potential::{
    capacity_report_with, green_partial_grid, robin_constant, verify_identity, CapacityOptions, IdentityOptions,
};
use polysemi_core::rng::tags;
use polysemi_core::semigroup::{check_main_condition, minimal_generating_set, DEFAULT_JULIA_TOLERANCE};
use polysemi_core::{Complex64, GeneratorSet};
use serde::Serialize;

use crate::config::{complex, Pair, RunConfig};
use crate::error::CliError;
use crate::export::{write_measure, write_raster};
use crate::raster::{render_field, render_points};

pub const THREADS_ENV: &str = "POLYSEMI_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Backward-orbit Julia sample rendered to julia.pgm.
    Julia,
    /// Pullback measure written to measure.csv.
    Measure,
    /// Finite-depth Green's function: green.ppm and green.json.
    Green,
    /// Potential identity residuals: identity.json and residual.ppm.
    Verify,
    /// Capacity and diameter bounds: capacity.json.
    Capacity,
    /// Minimal generating set: mingen.json.
    Mingen,
}

impl Command {
    fn tag(self) -> u64 {
        match self {
            Command::Julia => tags::JULIA,
            Command::Measure => tags::MEASURE,
            Command::Green => tags::GREEN,
            Command::Verify => tags::IDENTITY,
            Command::Capacity => tags::CAPACITY,
            Command::Mingen => 0,
        }
    }
}

/// Read the config, run `command` on a pool of `threads` workers (falling
/// back to `POLYSEMI_THREADS`, then the rayon default) and return the
/// written artifacts.
pub fn run(command: Command, config_path: &Path, out: Option<&Path>, threads: Option<usize>) -> Result<Vec<PathBuf>, CliError> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config_path.display())))?;
    let cfg = RunConfig::parse(&text)?;
    let threads = match threads {
        Some(k) => Some(k),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse().map_err(|_| CliError::Config(format!("{THREADS_ENV}={v} is not a count")))?),
            Err(_) => None,
        },
    };
    if threads == Some(0) {
        return Err(CliError::Config("thread count must be positive".into()));
    }
    let dir = out.map(Path::to_path_buf).or_else(|| cfg.output_dir.clone()).unwrap_or_else(|| PathBuf::from("."));

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_config(command, &cfg, &dir))
}

/// [`run`] with an already parsed config, on the current pool.
pub fn run_config(command: Command, cfg: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let g = cfg.generator_set()?;
    // compute first, then create the directory and write
    let artifacts = compute(command, cfg, &g)?;
    std::fs::create_dir_all(dir).map_err(|e| CliError::Unwritable { path: dir.to_path_buf(), message: e.to_string() })?;
    artifacts.into_iter().map(|a| a.write(dir)).collect()
}

enum Artifact {
    Json(&'static str, Vec<u8>),
    Raster(&'static str, crate::raster::RasterImage),
    Measure(&'static str, polysemi_core::EmpiricalMeasure),
}

impl Artifact {
    fn json<T: Serialize>(name: &'static str, value: &T) -> Self {
        Artifact::Json(name, crate::export::json_bytes(value))
    }

    fn write(self, dir: &Path) -> Result<PathBuf, CliError> {
        match self {
            Artifact::Json(name, bytes) => {
                let path = dir.join(name);
                crate::export::write_atomic(&path, &bytes)?;
                Ok(path)
            }
            Artifact::Raster(name, img) => write_raster(dir, name, &img),
            Artifact::Measure(name, mu) => write_measure(dir, name, &mu),
        }
    }
}

fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn base_point(cfg: &RunConfig, g: &GeneratorSet) -> Complex64 {
    cfg.base_point.map(complex).unwrap_or_else(|| default_base_point(g, cfg.seed, tags::BASE_POINT))
}

fn sample_config(cfg: &RunConfig, g: &GeneratorSet, tag: u64) -> SampleConfig {
    SampleConfig::stochastic(base_point(cfg, g), cfg.depth, cfg.sample_count, cfg.seed).with_tag(tag)
}

fn julia_points(cfg: &RunConfig, g: &GeneratorSet) -> Result<Vec<Complex64>, CliError> {
    julia_sample(g, &sample_config(cfg, g, tags::JULIA), cfg.burn_in()).map_err(CliError::from_core("julia_sample"))
}

#[derive(Serialize)]
struct GreenJson {
    depth: usize,
    base_point: Pair,
    #[serde(rename = "robin_F")]
    robin_f: f64,
    min: Option<f64>,
    max: Option<f64>,
    flagged_nodes: usize,
    rows: usize,
    cols: usize,
    note: &'static str,
}

#[derive(Serialize)]
struct MainConditionJson {
    holds: bool,
    explanation: String,
}

#[derive(Serialize)]
struct IdentityJson {
    depth: usize,
    samples: usize,
    seed: u64,
    max_residual: f64,
    mean_residual: f64,
    signed_mean: f64,
    positive_fraction: f64,
    #[serde(rename = "robin_F")]
    robin_f: f64,
    green_base_point: Pair,
    measure_base_point: Pair,
    excluded_nodes: usize,
    masked_nodes: usize,
    evaluated_nodes: usize,
    finite_nodes: usize,
    finite_fraction: f64,
    main_condition: MainConditionJson,
    note: &'static str,
}

#[derive(Serialize)]
struct FlagsJson {
    orbit_unbounded: bool,
    orbit_nondense: bool,
    all_deg_ge_2: bool,
    main_condition: bool,
}

#[derive(Serialize)]
struct DiscJson {
    center: Pair,
    radius: f64,
}

#[derive(Serialize)]
struct CapacityJson {
    #[serde(rename = "robin_F")]
    robin_f: f64,
    lower_bound: f64,
    cap_estimate: f64,
    diam_estimate: f64,
    diam_lower: f64,
    condition_flags: FlagsJson,
    hypotheses_hold: bool,
    cap_exceeds_lower: bool,
    diam_exceeds_lower: bool,
    z0: Pair,
    orbit_witness: Option<String>,
    nondense_disc: Option<DiscJson>,
    main_condition_explanation: String,
    leja_count: usize,
    sample_size: usize,
    seed: u64,
    depth: usize,
}

#[derive(Serialize)]
struct MingenJson {
    input_count: usize,
    removed: usize,
    generators: Vec<Vec<Pair>>,
}

fn compute(command: Command, cfg: &RunConfig, g: &GeneratorSet) -> Result<Vec<Artifact>, CliError> {
    let grid = cfg.grid_spec()?;
    match command {
        Command::Julia => {
            let pts = julia_points(cfg, g)?;
            Ok(vec![Artifact::Raster("julia.pgm", render_points(&pts, &grid))])
        }
        Command::Measure => {
            let a = base_point(cfg, g);
            let sc = if cfg.exhaustive {
                SampleConfig::exhaustive(a, cfg.depth)
            } else {
                sample_config(cfg, g, command.tag())
            };
            let mu = iterate_pullback(g, &sc).map_err(CliError::from_core("iterate_pullback"))?;
            Ok(vec![Artifact::Measure("measure.csv", mu)])
        }
        Command::Green => {
            let a = base_point(cfg, g);
            let field = green_partial_grid(g, a, &grid, cfg.depth).map_err(CliError::from_core("green_partial"))?;
            let range = field.finite_range();
            let summary = GreenJson {
                depth: cfg.depth,
                base_point: pair(a),
                robin_f: robin_constant(g),
                min: range.map(|r| r.0),
                max: range.map(|r| r.1),
                flagged_nodes: field.flags().iter().filter(|&&f| f).count(),
                rows: grid.rows,
                cols: grid.cols,
                note: polysemi_core::potential::GREEN_SUBSTITUTION_NOTE,
            };
            Ok(vec![Artifact::Raster("green.ppm", render_field(&field)), Artifact::json("green.json", &summary)])
        }
        Command::Verify => {
            let pts = julia_points(cfg, g)?;
            let main = check_main_condition(g, &pts, DEFAULT_JULIA_TOLERANCE)
                .map_err(CliError::from_core("check_main_condition"))?;
            if !main.holds {
                log::warn!("main condition does not hold ({}); running the identity check anyway", main.explanation);
            }
            let opts = IdentityOptions { annulus: cfg.annulus.map(|[a, b]| (a, b)), ..Default::default() };
            let report = verify_identity(g, &sample_config(cfg, g, command.tag()), &grid, &opts)
                .map_err(CliError::from_core("verify_identity"))?;
            let json = IdentityJson {
                depth: report.depth,
                samples: report.samples,
                seed: cfg.seed,
                max_residual: report.max_residual,
                mean_residual: report.mean_residual,
                signed_mean: report.signed_mean,
                positive_fraction: report.positive_fraction,
                robin_f: report.robin_constant,
                green_base_point: pair(report.green_base_point),
                measure_base_point: pair(report.measure_base_point),
                excluded_nodes: report.excluded_nodes,
                masked_nodes: report.masked_nodes,
                evaluated_nodes: report.evaluated_nodes,
                finite_nodes: report.finite_nodes,
                finite_fraction: report.finite_fraction(),
                main_condition: MainConditionJson { holds: main.holds, explanation: main.explanation },
                note: report.note,
            };
            Ok(vec![Artifact::json("identity.json", &json), Artifact::Raster("residual.ppm", render_field(&report.grid))])
        }
        Command::Capacity => {
            let pts = julia_points(cfg, g)?;
            let z0 = match cfg.z0 {
                Some(z) => complex(z),
                None => pts.iter().copied().fold(Complex64::new(0.0, 0.0), |best, z| if z.norm() > best.norm() { z } else { best }),
            };
            let opts = CapacityOptions { leja_count: cfg.leja_count, ..Default::default() };
            let r = capacity_report_with(g, &pts, z0, &opts).map_err(CliError::from_core("capacity_report"))?;
            let json = CapacityJson {
                robin_f: r.robin_f,
                lower_bound: r.lower_bound,
                cap_estimate: r.cap_estimate,
                diam_estimate: r.diam_estimate,
                diam_lower: r.diam_lower,
                condition_flags: FlagsJson {
                    orbit_unbounded: r.flags.orbit_unbounded,
                    orbit_nondense: r.flags.orbit_nondense,
                    all_deg_ge_2: r.flags.all_deg_ge_2,
                    main_condition: r.flags.main_condition,
                },
                hypotheses_hold: r.flags.all(),
                cap_exceeds_lower: r.cap_exceeds_lower,
                diam_exceeds_lower: r.diam_exceeds_lower,
                z0: pair(r.z0),
                orbit_witness: r.orbit_word.as_ref().map(ToString::to_string),
                nondense_disc: r.nondense_disc.map(|(c, radius)| DiscJson { center: pair(c), radius }),
                main_condition_explanation: r.main_condition_explanation,
                leja_count: r.leja_count,
                sample_size: r.sample_size,
                seed: cfg.seed,
                depth: cfg.depth,
            };
            Ok(vec![Artifact::json("capacity.json", &json)])
        }
        Command::Mingen => {
            let m = minimal_generating_set(g).map_err(CliError::from_core("minimal_generating_set"))?;
            let json = MingenJson {
                input_count: g.len(),
                removed: g.len() - m.len(),
                generators: m.gens().iter().map(|p| p.coeffs().iter().map(|&c| pair(c)).collect()).collect(),
            };
            Ok(vec![Artifact::json("mingen.json", &json)])
        }
    }
}
