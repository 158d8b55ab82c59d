use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest accepted `rows * cols`.
pub const MAX_GRID_NODES: usize = 1 << 24;

/// A rectangular lattice. Node `(row, col)` sits at
/// `origin + spacing * (col + i row)`, so row 0 is the bottom edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub origin: Complex64,
    pub spacing: f64,
    pub rows: usize,
    pub cols: usize,
}

impl GridSpec {
    pub fn new(origin: Complex64, spacing: f64, rows: usize, cols: usize) -> Result<Self> {
        let spec = Self { origin, spacing, rows, cols };
        spec.validate()?;
        Ok(spec)
    }

    /// `n x n` nodes spanning the square of half-width `half_width`
    /// around `center`, corners included.
    pub fn square(center: Complex64, half_width: f64, n: usize) -> Result<Self> {
        let spacing = 2.0 * half_width / (n.max(2) - 1) as f64;
        Self::new(center - Complex64::new(half_width, half_width), spacing, n, n)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return Err(Error::InvalidConfig(format!("grid spacing {} must be positive", self.spacing)));
        }
        if !self.origin.is_finite() {
            return Err(Error::InvalidConfig("grid origin must be finite".into()));
        }
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidConfig("grid needs at least one row and one column".into()));
        }
        if self.rows.checked_mul(self.cols).is_none_or(|n| n > MAX_GRID_NODES) {
            return Err(Error::InvalidConfig(format!(
                "grid {}x{} exceeds {MAX_GRID_NODES} nodes",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, row: usize, col: usize) -> Complex64 {
        self.origin + Complex64::new(col as f64 * self.spacing, row as f64 * self.spacing)
    }

    /// Node for a row-major index.
    pub fn node_at(&self, index: usize) -> Complex64 {
        self.node(index / self.cols, index % self.cols)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.len()).map(|k| self.node_at(k))
    }
}

/// Real values on a [`GridSpec`], row-major. `flags[k]` marks a masked or
/// singular node; NaN appears only at flagged nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    spec: GridSpec,
    values: Vec<f64>,
    flags: Vec<bool>,
}

impl GridField {
    pub fn new(spec: GridSpec, values: Vec<f64>, flags: Vec<bool>) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.len() {
            return Err(Error::LengthMismatch { expected: spec.len(), got: values.len() });
        }
        if flags.len() != spec.len() {
            return Err(Error::LengthMismatch { expected: spec.len(), got: flags.len() });
        }
        if values.iter().zip(&flags).any(|(v, &f)| v.is_nan() && !f) {
            return Err(Error::InvalidConfig("NaN value at an unflagged grid node".into()));
        }
        Ok(Self { spec, values, flags })
    }

    /// Evaluate `f` at every node in parallel; non-finite results are flagged.
    pub fn from_fn<F>(spec: GridSpec, f: F) -> Self
    where
        F: Fn(Complex64) -> f64 + Sync,
    {
        let values: Vec<f64> = (0..spec.len()).into_par_iter().map(|k| f(spec.node_at(k))).collect();
        let flags = values.iter().map(|v| !v.is_finite()).collect();
        Self { spec, values, flags }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.spec.cols + col]
    }

    /// `(min, max)` over finite values, if any.
    pub fn finite_range(&self) -> Option<(f64, f64)> {
        self.values
            .iter()
            .filter(|v| v.is_finite())
            .fold(None, |acc, &v| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_layout() {
        let g = GridSpec::new(Complex64::new(-1.0, -2.0), 0.5, 3, 4).unwrap();
        assert_eq!(g.node(0, 0), Complex64::new(-1.0, -2.0));
        assert_eq!(g.node(2, 3), Complex64::new(0.5, -1.0));
        assert_eq!(g.node_at(5), g.node(1, 1));
        assert_eq!(g.nodes().count(), 12);
    }

    #[test]
    fn square_grid_hits_corners() {
        let g = GridSpec::square(Complex64::new(0.5, 0.5), 2.0, 21).unwrap();
        assert_eq!(g.node(0, 0), Complex64::new(-1.5, -1.5));
        let far = g.node(20, 20);
        assert!((far - Complex64::new(2.5, 2.5)).norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(GridSpec::new(Complex64::new(0.0, 0.0), 0.0, 2, 2).is_err());
        assert!(GridSpec::new(Complex64::new(0.0, 0.0), 1.0, 0, 2).is_err());
        assert!(GridSpec::new(Complex64::new(0.0, 0.0), 1.0, 1 << 13, 1 << 12).is_err());
    }

    #[test]
    fn field_flags_non_finite() {
        let spec = GridSpec::new(Complex64::new(-1.0, 0.0), 1.0, 1, 3).unwrap();
        let f = GridField::from_fn(spec, |z| -z.norm().ln());
        assert_eq!(f.flags(), &[false, true, false]);
        assert_eq!(f.finite_range(), Some((-0.0, -0.0)));
        assert!(GridField::new(spec, vec![0.0, f64::NAN, 0.0], vec![false; 3]).is_err());
        assert!(GridField::new(spec, vec![0.0, f64::NAN, 0.0], vec![false, true, false]).is_ok());
    }
}
