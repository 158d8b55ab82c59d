use num_complex::Complex64;
use rayon::prelude::*;

use crate::dynamics::EmpiricalMeasure;
use crate::error::{Error, Result};

/// Exponents at or below this are reported as a continuity failure.
pub const HOLDER_FLOOR: f64 = 1e-2;

const MIN_ATOMS: usize = 1000;
const MIN_COUNT: usize = 10;

/// `2^hi, 2^{hi-1}, …, 2^lo` for `lo <= hi`.
pub fn dyadic_radii(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).rev().map(|k| 2f64.powi(k)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolderEstimate {
    /// Minimum fitted slope over centers; NaN when no center had two usable radii.
    pub alpha: f64,
    /// Fitted slope per center, `None` where fewer than two radii held ten atoms.
    pub per_center: Vec<Option<f64>>,
    pub continuity_ok: bool,
}

/// Least-squares slope of `log μ(D(z, r))` against `log r` over the radii
/// whose disc holds at least ten atoms, minimized over `centers`.
pub fn holder_mass_estimate(mu: &EmpiricalMeasure, centers: &[Complex64], radii: &[f64]) -> Result<HolderEstimate> {
    if mu.len() < MIN_ATOMS {
        return Err(Error::InsufficientAtoms { needed: MIN_ATOMS, got: mu.len() });
    }
    let per_center: Vec<Option<f64>> = centers
        .par_iter()
        .map(|&z| {
            let pts: Vec<(f64, f64)> = radii
                .iter()
                .filter(|&&r| mu.count_in_disc(z, r) >= MIN_COUNT)
                .map(|&r| (r.ln(), mu.mass_in_disc(z, r).ln()))
                .collect();
            slope(&pts)
        })
        .collect();
    let alpha = per_center.iter().flatten().copied().fold(f64::NAN, f64::min);
    Ok(HolderEstimate { alpha, per_center, continuity_ok: alpha > HOLDER_FLOOR })
}

fn slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Does every annulus `{c r <= |w - z| <= r}` around a sample point `z`
/// meet the sample, for `r` on a quarter-octave sweep from the diameter
/// down to the sampling floor?
///
/// The floor is `4 / (1 - c)` times the 99th percentile of the
/// nearest-neighbour distances: below it, sampling gaps alone can empty an
/// annulus. A handful of isolated points stays above the percentile and is
/// still caught. At most 512 evenly strided points serve as centers.
pub fn uniform_perfectness_check(points: &[Complex64], c: f64) -> bool {
    if points.len() < 2 || !(c > 0.0 && c < 1.0) {
        return false;
    }
    let stride = points.len().div_ceil(512).max(1);
    let centers: Vec<Complex64> = points.iter().step_by(stride).copied().collect();
    let sorted: Vec<Vec<f64>> = centers
        .par_iter()
        .map(|&z| {
            let mut d: Vec<f64> = points.iter().map(|&w| (w - z).norm()).filter(|&d| d > 0.0).collect();
            d.sort_by(f64::total_cmp);
            d
        })
        .collect();

    let diam = sorted.iter().filter_map(|d| d.last().copied()).fold(0.0, f64::max);
    let mut nearest: Vec<f64> = sorted.iter().filter_map(|d| d.first().copied()).collect();
    if nearest.is_empty() || diam == 0.0 {
        return false;
    }
    nearest.sort_by(f64::total_cmp);
    let floor = 4.0 * nearest[(nearest.len() * 99) / 100] / (1.0 - c);

    let mut r = diam * (1.0 - 1e-12);
    while r >= floor {
        let ok = sorted.iter().all(|d| {
            let k = d.partition_point(|&x| x < c * r);
            k < d.len() && d[k] <= r
        });
        if !ok {
            return false;
        }
        r *= 0.5f64.powf(0.25);
    }
    true
}
