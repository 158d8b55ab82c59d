//! Simultaneous root finding (Aberth–Ehrlich) with multiplicity clustering.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::ComplexPoly;
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 500;
const ACCEPT_RESIDUAL: f64 = 1e-12;

/// Approximate roots within `CLUSTER_RADIUS * (1 + |root|)` of each other
/// are merged into one root of summed multiplicity.
pub const CLUSTER_RADIUS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub location: Complex64,
    pub multiplicity: usize,
}

/// Distinct roots with multiplicities; multiplicities sum to the degree of
/// the polynomial that was solved.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RootSet {
    roots: Vec<Root>,
}

impl RootSet {
    pub fn new(roots: Vec<Root>) -> Self {
        Self { roots }
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Root> {
        self.roots.iter()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn locations(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.roots.iter().map(|r| r.location)
    }

    /// The root carrying multiplicity slot `slot`, counting each root
    /// `multiplicity` times in order.
    pub fn by_slot(&self, mut slot: usize) -> Option<Complex64> {
        for r in &self.roots {
            if slot < r.multiplicity {
                return Some(r.location);
            }
            slot -= r.multiplicity;
        }
        None
    }

    /// `leading * prod (z - x_i)^{m_i}`.
    pub fn reconstruct(&self, leading: Complex64) -> ComplexPoly {
        self.roots.iter().fold(ComplexPoly::constant(leading), |acc, r| {
            let factor = ComplexPoly::new(vec![-r.location, Complex64::new(1.0, 0.0)]);
            (0..r.multiplicity).fold(acc, |acc, _| acc.mul(&factor))
        })
    }
}

impl<'a> IntoIterator for &'a RootSet {
    type Item = &'a Root;
    type IntoIter = std::slice::Iter<'a, Root>;

    fn into_iter(self) -> Self::IntoIter {
        self.roots.iter()
    }
}

/// Solve `q(z) = 0` for a nonconstant `q`.
pub(super) fn solve(q: &ComplexPoly) -> Result<RootSet> {
    let coeffs = q.coeffs();
    let zeros = coeffs.iter().take_while(|c| c.re == 0.0 && c.im == 0.0).count();
    let reduced = ComplexPoly::new(coeffs[zeros..].to_vec());

    let mut approx = vec![Complex64::new(0.0, 0.0); zeros];
    match reduced.degree() {
        0 => {}
        1 => approx.push(-reduced.coeffs()[0] / reduced.coeffs()[1]),
        2 => approx.extend(quadratic(reduced.coeffs())),
        _ => approx.extend(aberth(&reduced)?),
    }
    Ok(cluster(approx))
}

/// Cancellation-free quadratic formula.
fn quadratic(c: &[Complex64]) -> [Complex64; 2] {
    let (c0, c1, c2) = (c[0], c[1], c[2]);
    let s = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    let sign = if (c1.conj() * s).re >= 0.0 { 1.0 } else { -1.0 };
    let t = -(c1 + sign * s) / 2.0;
    if t.norm() == 0.0 {
        // c1 = 0 and c0 = 0 (zero roots are stripped before this point, so
        // this is only reachable through rounding); a double root at zero.
        return [t, t];
    }
    [t / c2, c0 / t]
}

/// Positive root of `|c_n| x^n - sum_{k<n} |c_k| x^k`; every root lies in
/// the closed disc of that radius.
fn cauchy_radius(q: &ComplexPoly) -> f64 {
    let abs: Vec<f64> = q.coeffs().iter().map(|c| c.norm()).collect();
    let n = abs.len() - 1;
    let f = |x: f64| {
        let lower: f64 = abs[..n].iter().rev().fold(0.0, |acc, &a| acc * x + a);
        abs[n] * x.powi(n as i32) - lower * if n > 0 { 1.0 } else { 0.0 }
    };
    let mut hi = 1.0;
    while f(hi) <= 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn aberth(q: &ComplexPoly) -> Result<Vec<Complex64>> {
    let n = q.degree();
    let radius = cauchy_radius(q);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = TAU * k as f64 / n as f64 + 0.4;
            let r = radius * (1.0 + 0.05 * ((k as f64) * 1.7).sin());
            Complex64::from_polar(r, theta)
        })
        .collect();
    let mut done = vec![false; n];

    for _ in 0..MAX_ITERATIONS {
        if done.iter().all(|&d| d) {
            break;
        }
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = q.eval_with_derivative(z[i]);
            if p.norm() <= 4.0 * f64::EPSILON * q.abs_scale(z[i]) {
                done[i] = true;
                continue;
            }
            let ratio = if dp.norm() == 0.0 {
                // stuck on a critical point of q; nudge off it
                Complex64::new(radius * 1e-3, radius * 1e-3)
            } else {
                p / dp
            };
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            z[i] -= step;
            if step.norm() <= f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
    }

    let worst = z
        .iter()
        .map(|&x| q.eval(x).norm() / q.abs_scale(x).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    if !(worst <= ACCEPT_RESIDUAL) || z.iter().any(|x| !x.is_finite()) {
        return Err(Error::SolverFailure { residual: worst, iterations: MAX_ITERATIONS });
    }
    Ok(z)
}

/// Single-linkage clustering; each cluster is reported at its centroid.
fn cluster(approx: Vec<Complex64>) -> RootSet {
    let n = approx.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let tol = CLUSTER_RADIUS * (1.0 + approx[i].norm().max(approx[j].norm()));
            if (approx[i] - approx[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == root) {
            Some(g) => {
                g.1 += approx[i];
                g.2 += 1;
            }
            None => groups.push((root, approx[i], 1)),
        }
    }
    let mut roots: Vec<Root> = groups
        .into_iter()
        .map(|(_, sum, m)| Root { location: sum / m as f64, multiplicity: m })
        .collect();
    roots.sort_by(|a, b| {
        a.location
            .re
            .total_cmp(&b.location.re)
            .then(a.location.im.total_cmp(&b.location.im))
    });
    RootSet { roots }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_re(set: &RootSet) -> Vec<(f64, usize)> {
        set.iter().map(|r| (r.location.re, r.multiplicity)).collect()
    }

    #[test]
    fn square_roots_of_one() {
        let p = ComplexPoly::monomial(c(1.0, 0.0), 2);
        let r = p.roots(c(1.0, 0.0)).unwrap();
        assert_eq!(sorted_re(&r), vec![(-1.0, 1), (1.0, 1)]);
    }

    #[test]
    fn repeated_root_at_zero() {
        let p = ComplexPoly::monomial(c(1.0, 0.0), 2);
        let r = p.roots(c(0.0, 0.0)).unwrap();
        assert_eq!(r.roots(), &[Root { location: c(0.0, 0.0), multiplicity: 2 }]);
    }

    #[test]
    fn expanded_cubic() {
        // expand (z-1)(z-2)(z-3) by multiplying linear factors
        let lin = |a: f64| ComplexPoly::from_real(&[-a, 1.0]);
        let p = lin(1.0).mul(&lin(2.0)).mul(&lin(3.0));
        assert_eq!(p, ComplexPoly::from_real(&[-6.0, 11.0, -6.0, 1.0]));
        let r = p.roots(c(0.0, 0.0)).unwrap();
        assert_eq!(r.len(), 3);
        for (root, expected) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert_eq!(root.multiplicity, 1);
            assert!((root.location - c(expected, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn double_root_of_expanded_square() {
        // (z - 1 - i)^2 * (z + 2)
        let lin = |a: Complex64| ComplexPoly::new(vec![-a, c(1.0, 0.0)]);
        let p = lin(c(1.0, 1.0)).mul(&lin(c(1.0, 1.0))).mul(&lin(c(-2.0, 0.0)));
        let r = p.roots(c(0.0, 0.0)).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.total_multiplicity(), 3);
        let double = r.iter().find(|x| x.multiplicity == 2).unwrap();
        assert!((double.location - c(1.0, 1.0)).norm() < 1e-7);
    }

    #[test]
    fn slot_lookup_counts_multiplicity() {
        let set = RootSet::new(vec![
            Root { location: c(0.0, 0.0), multiplicity: 2 },
            Root { location: c(1.0, 0.0), multiplicity: 1 },
        ]);
        assert_eq!(set.by_slot(0), Some(c(0.0, 0.0)));
        assert_eq!(set.by_slot(1), Some(c(0.0, 0.0)));
        assert_eq!(set.by_slot(2), Some(c(1.0, 0.0)));
        assert_eq!(set.by_slot(3), None);
    }

    #[test]
    fn constant_has_no_roots() {
        assert_eq!(ComplexPoly::constant(c(2.0, 0.0)).roots(c(0.0, 0.0)), Err(Error::ConstantPolynomial));
    }

    #[test]
    fn high_degree_monomial() {
        let p = ComplexPoly::monomial(c(1.0, 0.0), 12);
        let r = p.roots(c(1.0, 0.0)).unwrap();
        assert_eq!(r.len(), 12);
        for root in &r {
            assert!((root.location.norm() - 1.0).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn reconstruction_round_trip(
            coeffs in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 2..10),
            a in (-2.0f64..2.0, -2.0f64..2.0),
        ) {
            let mut coeffs: Vec<Complex64> = coeffs.into_iter().map(|(re, im)| c(re, im)).collect();
            let last = coeffs.last_mut().unwrap();
            if last.norm() < 0.5 {
                *last += c(1.0, 0.0);
            }
            let p = ComplexPoly::new(coeffs);
            let a = c(a.0, a.1);
            let roots = p.roots(a).unwrap();
            prop_assert_eq!(roots.total_multiplicity(), p.degree());
            let back = roots.reconstruct(p.leading());
            let target = p.sub_constant(a);
            let tol = 1e-8 * p.max_coeff_abs();
            for (x, y) in back.coeffs().iter().zip(target.coeffs()) {
                prop_assert!((x - y).norm() <= tol, "{} vs {}", x, y);
            }
        }
    }
}
