use num_complex::Complex64;
use rayon::prelude::*;

use super::sampling::pullback_leaves;
use crate::error::Result;
use crate::semigroup::GeneratorSet;

/// Candidate values `1, 1/2, …, 2^-10` for the radius threshold `r₀`,
/// searched from the largest down.
pub const R0_CANDIDATES: [f64; 11] = [
    1.0,
    0.5,
    0.25,
    0.125,
    0.0625,
    0.03125,
    0.015625,
    0.0078125,
    0.00390625,
    0.001953125,
    0.0009765625,
];

/// Multiplicity-counted leaves of the `n`-fold pullback of `δ_a` lying in
/// the open disc `D(z, r)`.
pub fn disc_count(g: &GeneratorSet, a: Complex64, n: usize, z: Complex64, r: f64) -> Result<u64> {
    Ok(pullback_leaves(g, a, n)?.iter().filter(|l| (l.0 - z).norm() < r).map(|l| l.1).sum())
}

/// `max(D^{n - ν/κ + 1} N^{ν/κ - 1}, (D - 1/2)^n)`.
pub fn card_bound_rhs(d: usize, n_gens: usize, kappa: u32, n: usize, nu: u32) -> f64 {
    let (d, n_gens, n) = (d as f64, n_gens as f64, n as f64);
    let t = nu as f64 / kappa as f64;
    let first = d.powf(n - t + 1.0) * n_gens.powf(t - 1.0);
    first.max((d - 0.5).powf(n))
}

/// The `ν >= 1` with `r ∈ (r₀ M^{-2ν}, r₀ M^{-2(ν-1)}]`, or `None` when
/// `r > r₀` or `M <= 1`.
pub fn card_nu(r: f64, r0: f64, m_j: f64) -> Option<u32> {
    if !(r > 0.0 && r <= r0 && m_j > 1.0) {
        return None;
    }
    let upper = |nu: u32| r0 * m_j.powi(-2 * (nu as i32 - 1));
    let mut nu = ((r0 / r).ln() / (2.0 * m_j.ln())).ceil().max(1.0) as u32;
    while nu > 1 && r > upper(nu) {
        nu -= 1;
    }
    while r <= upper(nu + 1) {
        nu += 1;
    }
    Some(nu)
}

/// One evaluated instance of the disc-count inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CardCheck {
    pub n: usize,
    pub center: Complex64,
    pub radius: f64,
    pub nu: u32,
    pub count: u64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CardReport {
    pub kappa: u32,
    pub derivative_bound: f64,
    /// Largest candidate `r₀` with no violation, if any.
    pub calibrated_r0: Option<f64>,
    /// `(r₀, checks, violations)` for every candidate.
    pub per_candidate: Vec<(f64, usize, usize)>,
    /// Violations at the calibrated `r₀`, or at the smallest candidate
    /// when calibration failed.
    pub violations: Vec<CardCheck>,
    pub checks: usize,
}

/// Test `disc_count <= card_bound_rhs` for `n = 0..=max_n`, every center
/// and every dyadic radius `2^-k <= r₀` (`k <= 10`), for each candidate
/// `r₀` in [`R0_CANDIDATES`].
pub fn calibrate_r0(
    g: &GeneratorSet,
    a: Complex64,
    kappa: u32,
    derivative_bound: f64,
    max_n: usize,
    centers: &[Complex64],
) -> Result<CardReport> {
    let radii = R0_CANDIDATES;
    // counts[n][center][radius]
    let mut counts: Vec<Vec<Vec<u64>>> = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let leaves = pullback_leaves(g, a, n)?;
        let per_center = centers
            .par_iter()
            .map(|&z| {
                let mut d: Vec<(f64, u64)> = leaves.iter().map(|l| ((l.0 - z).norm(), l.1)).collect();
                d.sort_by(|x, y| x.0.total_cmp(&y.0));
                let mut prefix = Vec::with_capacity(d.len() + 1);
                prefix.push(0u64);
                for &(_, m) in &d {
                    prefix.push(prefix.last().unwrap() + m);
                }
                radii.iter().map(|&r| prefix[d.partition_point(|x| x.0 < r)]).collect()
            })
            .collect();
        counts.push(per_center);
    }

    let evaluate = |r0: f64| -> (usize, Vec<CardCheck>) {
        let mut checks = 0;
        let mut bad = Vec::new();
        for (n, per_center) in counts.iter().enumerate() {
            for (zi, row) in per_center.iter().enumerate() {
                for (ri, &r) in radii.iter().enumerate() {
                    let Some(nu) = card_nu(r, r0, derivative_bound) else { continue };
                    checks += 1;
                    let bound = card_bound_rhs(g.total_degree(), g.len(), kappa, n, nu);
                    if row[ri] as f64 > bound {
                        bad.push(CardCheck { n, center: centers[zi], radius: r, nu, count: row[ri], bound });
                    }
                }
            }
        }
        (checks, bad)
    };

    let mut per_candidate = Vec::new();
    let mut calibrated = None;
    for &r0 in &R0_CANDIDATES {
        let (checks, bad) = evaluate(r0);
        per_candidate.push((r0, checks, bad.len()));
        if bad.is_empty() && calibrated.is_none() {
            calibrated = Some(r0);
        }
    }
    let chosen = calibrated.unwrap_or(R0_CANDIDATES[R0_CANDIDATES.len() - 1]);
    let (checks, violations) = evaluate(chosen);
    Ok(CardReport { kappa, derivative_bound, calibrated_r0: calibrated, per_candidate, violations, checks })
}
