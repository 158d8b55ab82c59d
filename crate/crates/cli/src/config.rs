//! JSON run configuration. Complex numbers are `[re, im]` pairs and
//! polynomials list their coefficients in ascending degree.

use std::path::PathBuf;

use polysemi_core::{Complex64, ComplexPoly, GeneratorSet, GridSpec};
use serde::Deserialize;

use crate::error::CliError;

pub type Pair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub origin: Pair,
    pub spacing: f64,
    pub rows: usize,
    pub cols: usize,
}

impl Default for GridConfig {
    /// 512 x 512 nodes over `[-2, 2]²`.
    fn default() -> Self {
        Self { origin: [-2.0, -2.0], spacing: 4.0 / 511.0, rows: 512, cols: 512 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub generators: Vec<Vec<Pair>>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_samples")]
    pub sample_count: usize,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub base_point: Option<Pair>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Levels dropped from each walk before Julia sampling; default `depth / 2`.
    #[serde(default)]
    pub burn_in: Option<usize>,
    /// Enumerate all leaves in `measure` instead of sampling.
    #[serde(default)]
    pub exhaustive: bool,
    /// Orbit start for `capacity`; default the largest-modulus Julia sample point.
    #[serde(default)]
    pub z0: Option<Pair>,
    /// `[inner, outer]` radii restricting the `verify` grid.
    #[serde(default)]
    pub annulus: Option<Pair>,
    #[serde(default = "default_leja")]
    pub leja_count: usize,
}

fn default_depth() -> usize {
    12
}

fn default_samples() -> usize {
    10_000
}

fn default_leja() -> usize {
    256
}

pub fn complex(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), CliError> {
        if self.sample_count == 0 {
            return Err(CliError::Config("sample_count must be positive".into()));
        }
        if self.generators.iter().any(|g| g.is_empty()) {
            return Err(CliError::Config("a generator has no coefficients".into()));
        }
        let finite = |p: &Pair| p[0].is_finite() && p[1].is_finite();
        if !self.generators.iter().flatten().all(finite)
            || !self.base_point.iter().chain(&self.z0).all(finite)
        {
            return Err(CliError::Config("complex values must be finite".into()));
        }
        if let Some([inner, outer]) = self.annulus {
            if !(0.0 <= inner && inner < outer) {
                return Err(CliError::Config(format!("annulus [{inner}, {outer}] is empty")));
            }
        }
        if self.burn_in.is_some_and(|b| b >= self.depth) {
            return Err(CliError::Config("burn_in must be below depth".into()));
        }
        if self.leja_count < 2 {
            return Err(CliError::Config("leja_count must be at least 2".into()));
        }
        self.grid_spec()?;
        Ok(())
    }

    pub fn grid_spec(&self) -> Result<GridSpec, CliError> {
        let g = &self.grid;
        GridSpec::new(complex(g.origin), g.spacing, g.rows, g.cols).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn polynomials(&self) -> Vec<ComplexPoly> {
        self.generators.iter().map(|c| ComplexPoly::new(c.iter().map(|&p| complex(p)).collect())).collect()
    }

    /// Validated generators; violations map to the inadmissible exit code.
    pub fn generator_set(&self) -> Result<GeneratorSet, CliError> {
        GeneratorSet::validate(self.polynomials()).map_err(CliError::from_core("validate"))
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in.unwrap_or(self.depth / 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg = RunConfig::parse(r#"{"generators": [[[0,0],[0,0],[1,0]]]}"#).unwrap();
        assert_eq!(cfg.depth, 12);
        assert_eq!(cfg.sample_count, 10_000);
        assert_eq!(cfg.grid, GridConfig::default());
        assert_eq!(cfg.burn_in(), 6);
        assert_eq!(cfg.generator_set().unwrap().total_degree(), 2);
    }

    #[test]
    fn malformed_and_invalid_configs() {
        for text in [
            "{",
            r#"{"generators": [[[0,0],[1,0]]], "sede": 3}"#,
            r#"{"generators": [[[0,0],[1,0]]], "grid": {"origin": [0,0], "spacing": 0, "rows": 2, "cols": 2}}"#,
            r#"{"generators": [[[0,0],[1,0]]], "grid": {"origin": [0,0], "spacing": 1, "rows": 8192, "cols": 4096}}"#,
            r#"{"generators": [[]]}"#,
            r#"{"generators": [[[0,0],[1,0]]], "depth": 4, "burn_in": 4}"#,
        ] {
            assert_eq!(RunConfig::parse(text).unwrap_err().exit_code(), 2, "{text}");
        }
    }

    #[test]
    fn inadmissible_generators() {
        let cfg = RunConfig::parse(r#"{"generators": [[[1,0],[0.5,0]], [[0,0],[0,0],[1,0]]]}"#).unwrap();
        let err = cfg.generator_set().unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("|a| = 0.5"));
    }
}
