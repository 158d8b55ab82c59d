use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use polysemi_core::dynamics::{iterate_pullback, julia_sample, SampleConfig};
use polysemi_core::potential::{capacity_leja, green_partial};
use polysemi_core::rng::tags;
use polysemi_core::{Complex64, ComplexPoly, GeneratorSet};

fn two_quadratics() -> GeneratorSet {
    GeneratorSet::validate(vec![
        ComplexPoly::from_real(&[0.0, 0.0, 1.0]),
        ComplexPoly::from_real(&[1.0, -2.0, 1.0]),
    ])
    .unwrap()
}

fn roots(c: &mut Criterion) {
    let mut group = c.benchmark_group("roots");
    for degree in [2usize, 5, 12] {
        let coeffs: Vec<f64> = (0..=degree).map(|k| 1.0 + 0.3 * k as f64).collect();
        let p = ComplexPoly::from_real(&coeffs);
        group.bench_with_input(BenchmarkId::from_parameter(degree), &p, |b, p| {
            b.iter(|| p.roots(black_box(Complex64::new(0.7, -0.2))).unwrap())
        });
    }
    group.finish();
}

fn walks(c: &mut Criterion) {
    let g = two_quadratics();
    let cfg = SampleConfig::stochastic(Complex64::new(3.0, 1.0), 16, 10_000, 1);
    c.bench_function("stochastic_pullback_16x10k", |b| b.iter(|| iterate_pullback(&g, black_box(&cfg)).unwrap()));
    let exhaustive = SampleConfig::exhaustive(Complex64::new(3.0, 1.0), 10);
    c.bench_function("exhaustive_pullback_10", |b| b.iter(|| iterate_pullback(&g, black_box(&exhaustive)).unwrap()));
}

fn green(c: &mut Criterion) {
    let g = two_quadratics();
    let a = Complex64::new(3.0, 1.0);
    let mut group = c.benchmark_group("green_partial");
    for n in [6usize, 12] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| green_partial(&g, a, black_box(Complex64::new(0.4, 0.9)), n).unwrap())
        });
    }
    group.finish();
}

fn leja(c: &mut Criterion) {
    let g = two_quadratics();
    let cfg = SampleConfig::stochastic(Complex64::new(3.0, 1.0), 24, 1024, 2).with_tag(tags::JULIA);
    let pts = julia_sample(&g, &cfg, 12).unwrap();
    c.bench_function("leja_256_of_12k", |b| b.iter(|| capacity_leja(black_box(&pts), 256).unwrap()));
}

criterion_group!(benches, roots, walks, green, leja);
criterion_main!(benches);
