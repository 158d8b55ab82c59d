use num_complex::Complex64;
use rayon::prelude::*;

use super::green::{robin_constant, GreenTree};
use super::grid::{GridField, GridSpec};
use super::logpot::log_potential;
use crate::dynamics::{default_base_point, iterate_pullback, SampleConfig, SampleMode};
use crate::error::{Error, Result};
use crate::rng::tags;
use crate::semigroup::GeneratorSet;

/// Attached to every identity report.
pub const GREEN_SUBSTITUTION_NOTE: &str =
    "the finite-depth Green's function G_n stands in for its regularization on the grid";

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IdentityOptions {
    /// Keep only nodes with `inner <= |z| <= outer`.
    pub annulus: Option<(f64, f64)>,
    /// Replaces the Robin constant in the residual.
    pub constant_override: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub depth: usize,
    pub samples: usize,
    /// `|U^μ + G_n - F|` per node; masked and non-finite nodes are flagged NaN.
    pub grid: GridField,
    pub max_residual: f64,
    pub mean_residual: f64,
    /// Mean of the signed residual `U^μ + G_n - F`.
    pub signed_mean: f64,
    /// Fraction of evaluated nodes with positive signed residual.
    pub positive_fraction: f64,
    pub robin_constant: f64,
    pub green_base_point: Complex64,
    pub measure_base_point: Complex64,
    /// Nodes outside the annulus.
    pub excluded_nodes: usize,
    /// Nodes within one spacing of an atom.
    pub masked_nodes: usize,
    /// Nodes that were neither excluded nor masked.
    pub evaluated_nodes: usize,
    /// Evaluated nodes where both the potential and `G_n` were finite.
    pub finite_nodes: usize,
    pub note: &'static str,
}

impl IdentityReport {
    pub fn finite_fraction(&self) -> f64 {
        if self.evaluated_nodes == 0 {
            0.0
        } else {
            self.finite_nodes as f64 / self.evaluated_nodes as f64
        }
    }
}

/// Residual of `U^μ + G_n = F_G` on `grid`.
///
/// `cfg.base_point` feeds `G_n`. The measure is an independent stochastic
/// pullback from a second base point drawn from the seed, so the two sides
/// do not share the finite-depth cancellation that holds exactly when the
/// base points coincide.
pub fn verify_identity(
    g: &GeneratorSet,
    cfg: &SampleConfig,
    grid: &GridSpec,
    opts: &IdentityOptions,
) -> Result<IdentityReport> {
    let SampleMode::Stochastic { samples } = cfg.mode else {
        return Err(Error::InvalidConfig("identity check needs stochastic sampling".into()));
    };
    grid.validate()?;
    g.check_word_cap(cfg.depth)?;

    let measure_base_point = default_base_point(g, cfg.seed, tags::IDENTITY_MEASURE_BASE);
    let mu = iterate_pullback(g, &SampleConfig { base_point: measure_base_point, ..*cfg })?;
    let constant = opts.constant_override.unwrap_or_else(|| robin_constant(g));

    let len = grid.len();
    let mut excluded = vec![false; len];
    if let Some((inner, outer)) = opts.annulus {
        for (k, flag) in excluded.iter_mut().enumerate() {
            let r = grid.node_at(k).norm();
            *flag = !(inner <= r && r <= outer);
        }
    }

    let mut near_atom = vec![false; len];
    let h = grid.spacing;
    for z in mu.locations() {
        let u = (z - grid.origin) / h;
        let (c0, r0) = (u.re.floor() as i64, u.im.floor() as i64);
        for row in r0 - 1..=r0 + 2 {
            for col in c0 - 1..=c0 + 2 {
                if row < 0 || col < 0 || row >= grid.rows as i64 || col >= grid.cols as i64 {
                    continue;
                }
                let (row, col) = (row as usize, col as usize);
                if (grid.node(row, col) - z).norm() <= h {
                    near_atom[row * grid.cols + col] = true;
                }
            }
        }
    }

    let tree = GreenTree::new(g, cfg.base_point, cfg.depth);
    let scale = tree.scale(cfg.depth);
    let signed: Vec<Option<f64>> = (0..len)
        .into_par_iter()
        .map(|k| {
            if excluded[k] || near_atom[k] {
                return None;
            }
            let z = grid.node_at(k);
            Some(log_potential(&mu, z) + tree.sum(z, cfg.depth) / scale - constant)
        })
        .collect();

    let mut values = Vec::with_capacity(len);
    let mut flags = Vec::with_capacity(len);
    let (mut count, mut finite, mut max, mut sum, mut signed_sum, mut positive) = (0, 0, 0.0f64, 0.0, 0.0, 0);
    for (k, s) in signed.iter().enumerate() {
        match s {
            Some(v) => {
                count += 1;
                if v.is_finite() {
                    finite += 1;
                    max = max.max(v.abs());
                    sum += v.abs();
                    signed_sum += v;
                    if *v > 0.0 {
                        positive += 1;
                    }
                    values.push(v.abs());
                    flags.push(false);
                } else {
                    values.push(f64::NAN);
                    flags.push(true);
                }
            }
            None => {
                debug_assert!(excluded[k] || near_atom[k]);
                values.push(f64::NAN);
                flags.push(true);
            }
        }
    }
    let per = |x: f64| if finite > 0 { x / finite as f64 } else { f64::NAN };

    Ok(IdentityReport {
        depth: cfg.depth,
        samples,
        grid: GridField::new(*grid, values, flags)?,
        max_residual: if finite > 0 { max } else { f64::NAN },
        mean_residual: per(sum),
        signed_mean: per(signed_sum),
        positive_fraction: per(positive as f64),
        robin_constant: constant,
        green_base_point: cfg.base_point,
        measure_base_point,
        excluded_nodes: excluded.iter().filter(|&&e| e).count(),
        masked_nodes: (0..len).filter(|&k| !excluded[k] && near_atom[k]).count(),
        evaluated_nodes: count,
        finite_nodes: finite,
        note: GREEN_SUBSTITUTION_NOTE,
    })
}
