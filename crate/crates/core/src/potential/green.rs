use num_complex::Complex64;

use super::grid::{GridField, GridSpec};
use crate::error::Result;
use crate::semigroup::GeneratorSet;

/// Word-tree evaluator for `Σ_{l(g)=k} log|g(w) - a|`.
///
/// Once `|w|` passes `far`, every further image is dominated by its
/// leading term, so a subtree of depth `k` rooted at log-modulus `L` sums
/// to `D^k L + B_k` with `B_0 = 0` and `B_k = D^{k-1} log A + N B_{k-1}`,
/// `A = ∏|Λ_i|`. This keeps deep words finite.
pub(super) struct GreenTree<'a> {
    g: &'a GeneratorSet,
    a: Complex64,
    far: f64,
    log_leads: Vec<f64>,
    /// `(D^k, B_k)` for `k = 0..=n`.
    tails: Vec<(f64, f64)>,
}

impl<'a> GreenTree<'a> {
    pub(super) fn new(g: &'a GeneratorSet, a: Complex64, n: usize) -> Self {
        let log_leads: Vec<f64> = g.gens().iter().map(|p| p.leading().norm().ln()).collect();
        let log_a: f64 = log_leads.iter().sum();
        let d = g.total_degree() as f64;
        let big_n = g.len() as f64;

        let lower_terms = g
            .gens()
            .iter()
            .map(|p| {
                let c = p.coeffs();
                c[..c.len() - 1].iter().map(|x| x.norm()).sum::<f64>() / p.leading().norm()
            })
            .fold(0.0, f64::max);
        let far = (1e14 * (1.0 + a.norm() + lower_terms)).max(g.escape_radius().radius);

        let mut tails = Vec::with_capacity(n + 1);
        tails.push((1.0, 0.0));
        for k in 1..=n {
            let (dk, bk) = tails[k - 1];
            tails.push((dk * d, dk * log_a + big_n * bk));
        }
        Self { g, a, far, log_leads, tails }
    }

    fn far_sum(&self, log_modulus: f64, k: usize) -> f64 {
        let (dk, bk) = self.tails[k];
        dk * log_modulus + bk
    }

    /// `D^k`.
    pub(super) fn scale(&self, k: usize) -> f64 {
        self.tails[k].0
    }

    pub(super) fn sum(&self, w: Complex64, k: usize) -> f64 {
        if k == 0 {
            return (w - self.a).norm().ln();
        }
        if w.norm() > self.far {
            return self.far_sum(w.norm().ln(), k);
        }
        let mut total = 0.0;
        for (i, p) in self.g.gens().iter().enumerate() {
            let child = p.eval(w);
            total += if child.is_finite() {
                self.sum(child, k - 1)
            } else {
                let log_child = self.log_leads[i] + p.degree() as f64 * w.norm().ln();
                self.far_sum(log_child, k - 1)
            };
        }
        total
    }
}

/// `G_n(z) = D^{-n} Σ_{l(g)=n} log|g(z) - a|`, by pointwise word
/// evaluation. A vanishing factor gives `-∞`. Fails when `N^n` words
/// exceed the enumeration cap.
pub fn green_partial(g: &GeneratorSet, a: Complex64, z: Complex64, n: usize) -> Result<f64> {
    g.check_word_cap(n)?;
    let tree = GreenTree::new(g, a, n);
    Ok(tree.sum(z, n) / tree.tails[n].0)
}

/// [`green_partial`] on every node of `grid`, in parallel.
pub fn green_partial_grid(g: &GeneratorSet, a: Complex64, grid: &GridSpec, n: usize) -> Result<GridField> {
    g.check_word_cap(n)?;
    grid.validate()?;
    let tree = GreenTree::new(g, a, n);
    let scale = tree.tails[n].0;
    Ok(GridField::from_fn(*grid, |z| tree.sum(z, n) / scale))
}

/// The modified Robin constant `F_G = (D - N)^{-1} log|Λ(g_1) ⋯ Λ(g_N)|`.
pub fn robin_constant(g: &GeneratorSet) -> f64 {
    let gap = (g.total_degree() - g.len()) as f64;
    let product = g.leading_product_abs();
    if product.is_finite() && product > 0.0 {
        product.ln() / gap
    } else {
        g.gens().iter().map(|p| p.leading().norm().ln()).sum::<f64>() / gap
    }
}

/// `D^{-n} log ∏_{l(g)=n} |Λ(g)|` computed two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinPartial {
    /// Summed over every word of length `n`.
    pub direct: f64,
    /// `(1 - (N/D)^n) / (D - N) · log|Λ(g_1) ⋯ Λ(g_N)|`.
    pub closed_form: f64,
}

pub fn robin_partial_closed_form(g: &GeneratorSet, n: usize) -> f64 {
    let (d, big_n) = (g.total_degree() as f64, g.len() as f64);
    let log_a: f64 = g.gens().iter().map(|p| p.leading().norm().ln()).sum();
    (1.0 - (big_n / d).powi(n as i32)) / (d - big_n) * log_a
}

/// Both forms of the partial Robin sum. The direct sum walks the word tree
/// outermost generator first: a word's `log|Λ|` gains `e · log|Λ_i|` for
/// each factor, with `e` the product of the degrees already placed outside.
pub fn robin_partial(g: &GeneratorSet, n: usize) -> Result<RobinPartial> {
    g.check_word_cap(n)?;
    let log_leads: Vec<f64> = g.gens().iter().map(|p| p.leading().norm().ln()).collect();

    fn walk(g: &GeneratorSet, log_leads: &[f64], exponent: f64, acc: f64, k: usize) -> f64 {
        if k == 0 {
            return acc;
        }
        let mut total = 0.0;
        for (i, &l) in log_leads.iter().enumerate() {
            total += walk(g, log_leads, exponent * g.degrees()[i] as f64, acc + exponent * l, k - 1);
        }
        total
    }

    let direct = walk(g, &log_leads, 1.0, 0.0, n) / (g.total_degree() as f64).powi(n as i32);
    Ok(RobinPartial { direct, closed_form: robin_partial_closed_form(g, n) })
}
