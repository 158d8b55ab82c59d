use num_complex::Complex64;

use super::{minimal_generating_set, GeneratorSet};
use crate::error::{Error, Result};
use crate::poly::{ComplexPoly, CLUSTER_RADIUS};

/// Default proximity to a Julia sample that counts as membership.
pub const DEFAULT_JULIA_TOLERANCE: f64 = 1e-3;

const KAPPA_SCAN_LIMIT: u32 = 1_000_000;
const PREIMAGE_PROBE_DEPTH: usize = 6;
const FORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalData {
    /// Critical points of all generators.
    pub c_star: Vec<Complex64>,
    /// Members of `c_star` within the tolerance of the Julia sample.
    pub c_julia: Vec<Complex64>,
    pub kappa: Option<u32>,
}

/// Union of the generators' critical points, merged at the root-cluster radius.
pub fn critical_star(g: &GeneratorSet) -> Result<Vec<Complex64>> {
    let mut out: Vec<Complex64> = Vec::new();
    for p in g.gens() {
        for root in &p.critical_points()? {
            let x = root.location;
            if !out.iter().any(|y| (x - y).norm() <= CLUSTER_RADIUS * (1.0 + x.norm())) {
                out.push(x);
            }
        }
    }
    Ok(out)
}

fn distance_to_sample(x: Complex64, sample: &[Complex64]) -> f64 {
    sample.iter().map(|s| (x - s).norm()).fold(f64::INFINITY, f64::min)
}

pub fn critical_sets(g: &GeneratorSet, julia_sample: &[Complex64], eps_j: f64) -> Result<CriticalData> {
    let c_star = critical_star(g)?;
    let c_julia = c_star
        .iter()
        .copied()
        .filter(|&x| distance_to_sample(x, julia_sample) <= eps_j)
        .collect();
    let kappa = if c_star.len() > 1 { Some(kappa_for(g, &c_star)?) } else { None };
    Ok(CriticalData { c_star, c_julia, kappa })
}

/// Left side of the κ inequality at `x`:
/// `Σ_{g_i'(x) ≠ 0} (D/N)^{1/κ} + Σ_{g_i'(x) = 0} ord_x(g_i)`.
pub(crate) fn kappa_lhs(g: &GeneratorSet, x: Complex64, kappa: u32) -> Result<f64> {
    let growth = g.ratio().powf(1.0 / kappa as f64);
    let mut total = 0.0;
    for p in g.gens() {
        let order = p.local_order(x)?;
        total += if order == 1 { growth } else { order as f64 };
    }
    Ok(total)
}

fn kappa_for(g: &GeneratorSet, c_star: &[Complex64]) -> Result<u32> {
    let bound = g.total_degree() as f64 - 0.5;
    for kappa in 1..=KAPPA_SCAN_LIMIT {
        let mut ok = true;
        for &x in c_star {
            if kappa_lhs(g, x, kappa)? > bound {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(kappa);
        }
    }
    Err(Error::HypothesisViolation(format!(
        "no κ <= {KAPPA_SCAN_LIMIT} satisfies the critical-order inequality"
    )))
}

/// Smallest `κ` with the critical-order inequality `<= D - 1/2` at every
/// critical point. Needs at least two distinct critical points.
pub fn select_kappa(g: &GeneratorSet) -> Result<u32> {
    let c_star = critical_star(g)?;
    if c_star.len() <= 1 {
        return Err(Error::HypothesisViolation(format!(
            "κ needs more than one critical point, found {}",
            c_star.len()
        )));
    }
    kappa_for(g, &c_star)
}

/// Is `p` of the form `B(z - a)^m + a`?
pub fn is_common_center_form(p: &ComplexPoly, a: Complex64) -> bool {
    let taylor = p.taylor_coefficients(a);
    let m = p.degree();
    let scale = taylor.iter().map(|c| c.norm()).fold(0.0, f64::max).max(a.norm());
    let tol = FORM_TOLERANCE * scale.max(1.0);
    (taylor[0] - a).norm() <= tol && taylor[1..m].iter().all(|c| c.norm() <= tol)
}

/// Whether the backward orbit of `a` closes up within the probe depth.
fn preimage_orbit_is_finite(g: &GeneratorSet, a: Complex64) -> Result<bool> {
    let mut orbit = vec![a];
    let mut frontier = vec![a];
    for _ in 0..PREIMAGE_PROBE_DEPTH {
        let mut next = Vec::new();
        for &x in &frontier {
            for p in g.gens() {
                for y in p.roots(x)?.locations() {
                    let seen = orbit
                        .iter()
                        .any(|o| (y - o).norm() <= 1e3 * CLUSTER_RADIUS * (1.0 + y.norm()));
                    if !seen {
                        orbit.push(y);
                        next.push(y);
                    }
                }
            }
        }
        if next.is_empty() {
            return Ok(true);
        }
        frontier = next;
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MainConditionReason {
    /// The minimal generating set has zero or several critical points.
    CriticalCountNotOne,
    /// The single critical point is away from the Julia sample.
    CriticalOutsideJulia,
    /// The generators do not share the common-center form, so the critical
    /// point is not exceptional.
    NotExceptional,
    /// Every generator is `B(z - a)^m + a`: the critical point is exceptional.
    Exceptional,
    /// The form certificate and the preimage probe disagree.
    Undecided,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MainCondition {
    pub holds: bool,
    pub reason: MainConditionReason,
    pub explanation: String,
}

/// The hypothesis "if the minimal generating set has exactly one critical
/// point `a`, then `a` is not both in the Julia set and exceptional".
///
/// Exceptionality uses the common-center certificate, cross-checked against
/// a finite-depth backward-orbit probe. Disagreement is reported as
/// undecided and treated as failing.
pub fn check_main_condition(
    g: &GeneratorSet,
    julia_sample: &[Complex64],
    eps_j: f64,
) -> Result<MainCondition> {
    let minimal = minimal_generating_set(g)?;
    let c_star = critical_star(&minimal)?;
    if c_star.len() != 1 {
        return Ok(MainCondition {
            holds: true,
            reason: MainConditionReason::CriticalCountNotOne,
            explanation: format!(
                "minimal generating set has {} critical points",
                c_star.len()
            ),
        });
    }
    let a = c_star[0];
    let dist = distance_to_sample(a, julia_sample);
    if dist > eps_j {
        return Ok(MainCondition {
            holds: true,
            reason: MainConditionReason::CriticalOutsideJulia,
            explanation: format!(
                "single critical point {a} lies {dist:.3e} from the Julia sample (tolerance {eps_j:.1e})"
            ),
        });
    }
    let form = minimal.gens().iter().all(|p| is_common_center_form(p, a));
    let finite = preimage_orbit_is_finite(&minimal, a)?;
    let (holds, reason, explanation) = match (form, finite) {
        (true, true) => (
            false,
            MainConditionReason::Exceptional,
            format!("every generator has the form B(z - a)^m + a with a = {a}; a is exceptional and in the Julia set"),
        ),
        (false, false) => (
            true,
            MainConditionReason::NotExceptional,
            format!("critical point {a} is in the Julia set but its backward orbit is infinite"),
        ),
        (true, false) | (false, true) => (
            false,
            MainConditionReason::Undecided,
            format!(
                "exceptionality of {a} undecided: common-center form {form}, backward orbit closed within depth {PREIMAGE_PROBE_DEPTH}: {finite}"
            ),
        ),
    };
    Ok(MainCondition { holds, reason, explanation })
}

#[cfg(test)]
mod tests {
    use super::super::tests::set;
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn circle(r: f64, n: usize) -> Vec<Complex64> {
        (0..n).map(|k| Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / n as f64)).collect()
    }

    #[test]
    fn critical_star_of_two_quadratics() {
        let g = set(&[&[0.0, 0.0, 1.0], &[1.0, -2.0, 1.0]]);
        let mut cs = critical_star(&g).unwrap();
        cs.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert_eq!(cs.len(), 2);
        assert!(cs[0].norm() < 1e-12 && (cs[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn annulus_semigroup_has_no_julia_critical_point() {
        let g = set(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.25]]);
        let mut sample = circle(1.0, 500);
        sample.extend(circle(4.0, 500));
        let data = critical_sets(&g, &sample, DEFAULT_JULIA_TOLERANCE).unwrap();
        assert_eq!(data.c_star.len(), 1);
        assert!(data.c_julia.is_empty());
        assert_eq!(data.kappa, None);
    }

    #[test]
    fn zero_tolerance_keeps_exact_point() {
        // 3z has its repelling fixed point 0 in the Julia set
        let g = set(&[&[0.0, 3.0], &[0.0, 0.0, 1.0]]);
        let data = critical_sets(&g, &[c(0.0, 0.0), c(1.0, 0.0)], 0.0).unwrap();
        assert_eq!(data.c_julia, vec![c(0.0, 0.0)]);
    }

    #[test]
    fn kappa_for_two_quadratics() {
        let g = set(&[&[0.0, 0.0, 1.0], &[1.0, -2.0, 1.0]]);
        assert_eq!(select_kappa(&g).unwrap(), 2);
    }

    #[test]
    fn kappa_for_cubic_and_quadratic() {
        let g = set(&[&[0.0, 0.0, 0.0, 1.0], &[1.0, -2.0, 1.0]]);
        assert_eq!(select_kappa(&g).unwrap(), 3);
    }

    #[test]
    fn kappa_is_minimal() {
        for gens in [
            vec![vec![0.0, 0.0, 1.0], vec![1.0, -2.0, 1.0]],
            vec![vec![0.0, 0.0, 0.0, 1.0], vec![1.0, -2.0, 1.0]],
            vec![vec![0.0, -3.0, 0.0, 1.0], vec![0.5, 2.0]],
        ] {
            let refs: Vec<&[f64]> = gens.iter().map(|v| v.as_slice()).collect();
            let g = set(&refs);
            let kappa = select_kappa(&g).unwrap();
            let bound = g.total_degree() as f64 - 0.5;
            let cs = critical_star(&g).unwrap();
            assert!(cs.iter().all(|&x| kappa_lhs(&g, x, kappa).unwrap() <= bound));
            if kappa > 1 {
                assert!(cs.iter().any(|&x| kappa_lhs(&g, x, kappa - 1).unwrap() > bound));
            }
        }
    }

    #[test]
    fn kappa_needs_two_critical_points() {
        let g = set(&[&[0.0, 0.0, 1.0]]);
        assert!(matches!(select_kappa(&g), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn common_center_form() {
        assert!(is_common_center_form(&ComplexPoly::from_real(&[0.0, 3.0]), c(0.0, 0.0)));
        assert!(is_common_center_form(&ComplexPoly::from_real(&[2.0, -2.0, 1.0]), c(1.0, 0.0)));
        assert!(!is_common_center_form(&ComplexPoly::from_real(&[-1.0, 0.0, 1.0]), c(0.0, 0.0)));
    }

    #[test]
    fn main_condition_annulus_holds() {
        let g = set(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.25]]);
        let mut sample = circle(1.0, 500);
        sample.extend(circle(4.0, 500));
        let mc = check_main_condition(&g, &sample, DEFAULT_JULIA_TOLERANCE).unwrap();
        assert!(mc.holds);
        assert_eq!(mc.reason, MainConditionReason::CriticalOutsideJulia);
    }

    #[test]
    fn main_condition_exceptional_fails() {
        let g = set(&[&[0.0, 3.0], &[0.0, 0.0, 1.0]]);
        let mut sample = circle(1.0, 200);
        sample.push(c(0.0, 0.0));
        let mc = check_main_condition(&g, &sample, DEFAULT_JULIA_TOLERANCE).unwrap();
        assert!(!mc.holds);
        assert_eq!(mc.reason, MainConditionReason::Exceptional);
    }

    #[test]
    fn main_condition_nonexceptional_holds() {
        let g = set(&[&[-1.0, 0.0, 1.0], &[0.0, 0.0, 1.0]]);
        // force the critical point into the sample so the exceptionality branch runs
        let mut sample = circle(1.0, 200);
        sample.push(c(0.0, 0.0));
        let mc = check_main_condition(&g, &sample, DEFAULT_JULIA_TOLERANCE).unwrap();
        assert!(mc.holds);
        assert_eq!(mc.reason, MainConditionReason::NotExceptional);
    }

    #[test]
    fn main_condition_two_critical_points() {
        let g = set(&[&[0.0, 0.0, 1.0], &[1.0, -2.0, 1.0]]);
        let mc = check_main_condition(&g, &circle(1.0, 10), DEFAULT_JULIA_TOLERANCE).unwrap();
        assert!(mc.holds);
        assert_eq!(mc.reason, MainConditionReason::CriticalCountNotOne);
    }
}
