use num_complex::Complex64;

use super::GeneratorSet;

/// Escape constants: every generator satisfies `|g(z)| > M|z|` once
/// `|z| > R_esc`, so `{|z| > R_esc}` is forward invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EscapeData {
    /// Expansion factor `M > 1`.
    pub expansion: f64,
    /// Escape radius `R_esc > 0`.
    pub radius: f64,
    /// `max |g_i'|` over a Julia sample, when one has been supplied.
    pub julia_derivative_bound: Option<f64>,
    /// `log(D/N) / log(julia_derivative_bound)`.
    pub lambda: Option<f64>,
}

impl GeneratorSet {
    /// Explicit escape constants from coefficient bounds.
    ///
    /// A degree `d >= 2` generator obeys
    /// `|g(z)| >= |Λ||z|^d - Σ_{k<d} |a_k||z|^k`; an affine `az + b` obeys
    /// `|g(z)| >= |a||z| - |b|`. `M` is 2, lowered below `|a|` for weak affine
    /// generators, and the radius is the largest per-generator threshold.
    pub fn escape_radius(&self) -> EscapeData {
        let min_affine = self
            .gens
            .iter()
            .filter(|g| g.degree() == 1)
            .map(|g| g.leading().norm())
            .fold(f64::INFINITY, f64::min);
        let expansion = 2.0f64.min(0.5 * (1.0 + min_affine));

        let radius = self
            .gens
            .iter()
            .map(|g| {
                let abs: Vec<f64> = g.coeffs().iter().map(|c| c.norm()).collect();
                if g.degree() == 1 {
                    abs[0] / (abs[1] - expansion)
                } else {
                    threshold(&abs, expansion)
                }
            })
            .fold(0.0, f64::max)
            .max(1e-9);

        EscapeData { expansion, radius, julia_derivative_bound: None, lambda: None }
    }

    /// [`escape_radius`](Self::escape_radius) completed with the Julia-set
    /// derivative bound estimated from `julia_sample`.
    pub fn escape_data_with_sample(&self, julia_sample: &[Complex64]) -> EscapeData {
        let mut data = self.escape_radius();
        if let Some((bound, lambda)) = julia_derivative_bound(self, julia_sample) {
            data.julia_derivative_bound = Some(bound);
            data.lambda = Some(lambda);
        }
        data
    }
}

/// `(M_J, λ)` with `M_J = max_i max_{z ∈ sample} |g_i'(z)|` and
/// `λ = log(D/N) / log(M_J)`. `None` for an empty sample or `M_J <= 1`.
pub fn julia_derivative_bound(g: &GeneratorSet, sample: &[Complex64]) -> Option<(f64, f64)> {
    let derivs: Vec<_> = g.gens().iter().map(|p| p.derivative()).collect();
    let bound = sample
        .iter()
        .flat_map(|&z| derivs.iter().map(move |d| d.eval(z).norm()))
        .fold(0.0, f64::max);
    (bound > 1.0).then(|| (bound, g.ratio().ln() / bound.ln()))
}

/// Smallest `r` (to bisection precision, rounded up) beyond which
/// `|Λ| r^d - Σ_{k<d} |a_k| r^k - M r > 0`. The function has one sign
/// change in its coefficients, so it has a unique positive root.
fn threshold(abs: &[f64], expansion: f64) -> f64 {
    let d = abs.len() - 1;
    let f = |r: f64| {
        let lower: f64 = abs[..d].iter().rev().fold(0.0, |acc, &a| acc * r + a);
        abs[d] * r.powi(d as i32) - lower - expansion * r
    };
    let mut hi = 1.0;
    while f(hi) <= 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
