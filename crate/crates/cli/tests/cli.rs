use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use polysemi::export::parse_measure_csv;

fn bin() -> &'static Path {
    Path::new(env!("CARGO_BIN_EXE_polysemi"))
}

fn run(sub: &str, config: &str, out: &Path) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join(format!("{sub}-config.json"));
    std::fs::write(&path, config).unwrap();
    Command::new(bin()).args([sub, "--config"]).arg(&path).arg("--out").arg(out).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("terminated by signal")
}

fn workspace() -> (tempfile::TempDir, PathBuf) {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    (tmp, out)
}

const SQUARE: &str = r#"[[0,0],[0,0],[1,0]]"#;

#[test]
fn malformed_json_exits_2_without_artifacts() {
    let (_tmp, out) = workspace();
    let o = run("julia", r#"{"generators": [[[0,0],[0,0],[1,0]]"#, &out);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!out.exists());

    let o = run("measure", &format!(r#"{{"generators": [{SQUARE}], "depth": 4, "burn": 1}}"#), &out);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
}

#[test]
fn missing_config_exits_2() {
    let (tmp, out) = workspace();
    let o = Command::new(bin())
        .args(["mingen", "--config"])
        .arg(tmp.path().join("absent.json"))
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn inadmissible_generators_exit_3() {
    let (_tmp, out) = workspace();
    // |a| = 0.5 affine generator
    let o = run("measure", &format!(r#"{{"generators": [{SQUARE}, [[1,0],[0.5,0]]]}}"#), &out);
    assert_eq!(code(&o), 3);
    // no generator of degree two or more
    let o = run("measure", r#"{"generators": [[[0,0],[3,0]]]}"#, &out);
    assert_eq!(code(&o), 3);
    assert!(!out.exists());
}

#[test]
fn numerical_failure_exits_4() {
    let (_tmp, out) = workspace();
    let cfg = format!(
        r#"{{"generators": [{SQUARE}, [[1,0],[-2,0],[1,0]]], "depth": 30,
            "grid": {{"origin": [0,0], "spacing": 0.5, "rows": 2, "cols": 2}}}}"#
    );
    let o = run("green", &cfg, &out);
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!out.exists());
}

#[test]
fn unwritable_output_exits_5() {
    let (tmp, _) = workspace();
    let blocker = tmp.path().join("file");
    std::fs::write(&blocker, b"x").unwrap();
    let o = run("mingen", &format!(r#"{{"generators": [{SQUARE}]}}"#), &blocker.join("sub"));
    assert_eq!(code(&o), 5);
}

#[test]
fn julia_of_square_lies_on_unit_circle() {
    let (_tmp, out) = workspace();
    let o = run("julia", &format!(r#"{{"generators": [{SQUARE}], "seed": 11, "depth": 16, "sample_count": 20000}}"#), &out);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let bytes = std::fs::read(out.join("julia.pgm")).unwrap();
    let header = b"P5\n512 512\n255\n";
    assert_eq!(&bytes[..header.len()], header);
    let pixels = &bytes[header.len()..];
    assert_eq!(pixels.len(), 512 * 512);

    let h = 4.0 / 511.0;
    let mut bright = 0;
    for (k, &v) in pixels.iter().enumerate() {
        if v == 0 {
            continue;
        }
        bright += 1;
        let (row, col) = (k / 512, k % 512);
        let x = -2.0 + h * col as f64;
        let y = 2.0 - h * row as f64;
        let off = ((x * x + y * y).sqrt() - 1.0).abs() / h;
        assert!(off <= 2.0, "pixel ({row}, {col}) is {off:.2} px from the circle");
    }
    assert!(bright > 1000, "{bright} lit pixels");
}

#[test]
fn mingen_drops_fourth_power() {
    let (_tmp, out) = workspace();
    let cfg = format!(r#"{{"generators": [[[0,0],[0,0],[0,0],[0,0],[1,0]], [[1,0],[-2,0],[1,0]], {SQUARE}]}}"#);
    let o = run("mingen", &cfg, &out);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("mingen.json")).unwrap()).unwrap();
    assert_eq!(v["input_count"], 3);
    assert_eq!(v["removed"], 1);
    let gens = v["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 2);
    let expected = serde_json::json!([[[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [-2.0, 0.0], [1.0, 0.0]]]);
    assert_eq!(v["generators"], expected);
}

#[test]
fn capacity_reports_exact_robin_constant() {
    let (_tmp, out) = workspace();
    let o = run("capacity", r#"{"generators": [[[0,0],[0,0],[2,0]]], "seed": 1, "depth": 16, "sample_count": 2000}"#, &out);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("capacity.json")).unwrap();
    assert!(text.contains(r#""robin_F": 0.69314718055994529"#), "{text}");
    assert!(text.ends_with('\n'));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["robin_F"].as_f64().unwrap().to_bits(), std::f64::consts::LN_2.to_bits());
}

#[test]
fn measure_csv_round_trips() {
    let (_tmp, out) = workspace();
    let cfg = format!(r#"{{"generators": [{SQUARE}, [[-1,0],[0,0],[1,0]]], "depth": 5, "exhaustive": true}}"#);
    let o = run("measure", &cfg, &out);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("measure.csv")).unwrap();
    let mu = parse_measure_csv(&text).unwrap();
    assert_eq!(mu.len(), 4usize.pow(5));
    assert!((mu.total_mass() - 1.0).abs() < 1e-12);
    assert_eq!(polysemi::export::measure_csv(&mu), text);
}

#[test]
fn output_dir_from_config_is_used_without_flag() {
    let tmp = tempfile::tempdir().unwrap();
    let target = tmp.path().join("from-config");
    let cfg = format!(r#"{{"generators": [{SQUARE}], "output_dir": {:?}}}"#, target.to_str().unwrap());
    let path = tmp.path().join("c.json");
    std::fs::write(&path, cfg).unwrap();
    let o = Command::new(bin()).args(["mingen", "--config"]).arg(&path).output().unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(target.join("mingen.json").exists());
}
