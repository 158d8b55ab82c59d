//! End-to-end checks across modules: pullback measures, potentials, the
//! Green's function and capacity estimates agree with exact relations.

use polysemi_core::dynamics::{iterate_pullback, julia_sample, pullback_leaves, SampleConfig};
use polysemi_core::potential::{
    capacity_leja, green_partial, log_potential, robin_constant, robin_partial, robin_partial_closed_form,
};
use polysemi_core::rng::tags;
use polysemi_core::{Complex64, ComplexPoly, GeneratorSet};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn set(gens: &[&[f64]]) -> GeneratorSet {
    GeneratorSet::validate(gens.iter().map(|g| ComplexPoly::from_real(g)).collect()).unwrap()
}

fn test_sets() -> Vec<GeneratorSet> {
    vec![
        set(&[&[0.0, 0.0, 1.0], &[1.0, -2.0, 1.0]]),
        set(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.25]]),
        set(&[&[-1.0, 0.0, 1.0], &[0.0, 0.0, 0.0, 1.0]]),
        set(&[&[0.0, 0.0, 2.0], &[0.5, 3.0]]),
    ]
}

// Σ_{l(g)=n} log|g(z) - a| splits into leading coefficients and roots, so
// with the exhaustive pullback the identity holds exactly at every depth.
#[test]
fn exact_identity_with_exhaustive_measure() {
    let a = c(0.4, -0.3);
    let probes = [c(1.7, 0.2), c(-0.6, 1.1), c(0.05, -0.9), c(2.5, -2.5)];
    for g in test_sets() {
        for n in 1..=4 {
            let mu = iterate_pullback(&g, &SampleConfig::exhaustive(a, n)).unwrap();
            let robin = robin_partial(&g, n).unwrap();
            assert!((robin.direct - robin.closed_form).abs() < 1e-12);
            for z in probes {
                let lhs = log_potential(&mu, z) + green_partial(&g, a, z, n).unwrap();
                assert!((lhs - robin.direct).abs() < 1e-9, "n = {n}, z = {z}: {lhs} vs {}", robin.direct);
            }
        }
    }
}

#[test]
fn leaf_multiplicities_match_degree_products() {
    let g = set(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0, 1.0]]);
    // a = 0: every word's preimages collapse onto 0
    let leaves = pullback_leaves(&g, c(0.0, 0.0), 3).unwrap();
    let total: u64 = leaves.iter().map(|l| l.1).sum();
    assert_eq!(total, 125);
    let mu = iterate_pullback(&g, &SampleConfig::exhaustive(c(0.0, 0.0), 3)).unwrap();
    assert!((mu.mass_in_disc(c(0.0, 0.0), 1e-6) - 1.0).abs() < 1e-12);
}

#[test]
fn stochastic_measure_tracks_exhaustive() {
    let g = set(&[&[0.0, 0.0, 1.0], &[1.0, -2.0, 1.0]]);
    let a = c(3.0, 1.0);
    let exact = iterate_pullback(&g, &SampleConfig::exhaustive(a, 7)).unwrap();
    let sampled = iterate_pullback(&g, &SampleConfig::stochastic(a, 7, 200_000, 17)).unwrap();
    for (center, r) in [(c(0.0, 0.0), 0.5), (c(1.0, 0.0), 0.5), (c(0.5, 0.5), 0.4), (c(-0.4, 0.0), 0.3)] {
        let p = exact.mass_in_disc(center, r);
        let q = sampled.mass_in_disc(center, r);
        let sigma = (p * (1.0 - p) / 200_000.0).sqrt();
        assert!((p - q).abs() <= 5.0 * sigma + 1e-12, "{center}, {r}: {p} vs {q}");
    }
}

#[test]
fn chebyshev_julia_set_has_unit_capacity() {
    let g = set(&[&[-2.0, 0.0, 1.0]]);
    assert_eq!(robin_constant(&g), 0.0);
    let cfg = SampleConfig::stochastic(c(5.0, 1.0), 24, 1000, 8).with_tag(tags::JULIA);
    let pts = julia_sample(&g, &cfg, 12).unwrap();
    assert!(pts.iter().all(|z| z.im.abs() < 1e-2 && z.re.abs() <= 2.0 + 1e-2));
    let cap = capacity_leja(&pts, 200).unwrap();
    // the interval [-2, 2] has capacity 1; discrete Leja estimates sit slightly above
    assert!(cap > 0.98 && cap < 1.06, "{cap}");
}

// far out, G_n(z) = log|z| + D^{-n} Σ log|Λ(g)| + o(1)
#[test]
fn green_function_grows_like_log_outside() {
    let g = set(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.25]]);
    let a = c(6.0, 0.0);
    for r in [40.0, 400.0, 4000.0] {
        let z = c(0.0, r);
        let gz = green_partial(&g, a, z, 10).unwrap();
        let expected = r.ln() + robin_partial_closed_form(&g, 10);
        assert!((gz - expected).abs() < 1e-3, "r = {r}: {gz} vs {expected}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn robin_direct_equals_closed_form(
        l0 in 0.1f64..5.0, l1 in 0.1f64..5.0, l2 in 1.1f64..4.0, n in 0usize..=6,
    ) {
        let g = set(&[&[0.3, 0.0, l0], &[0.0, -1.0, 0.0, l1], &[-0.2, l2]]);
        let robin = robin_partial(&g, n).unwrap();
        prop_assert!((robin.direct - robin.closed_form).abs() <= 1e-10 * (1.0 + robin.closed_form.abs()));
        prop_assert!((robin_partial_closed_form(&g, 60) - robin_constant(&g)).abs() < 1e-6);
    }
}
