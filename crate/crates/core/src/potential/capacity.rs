use std::collections::VecDeque;

use num_complex::Complex64;
use rayon::prelude::*;

use super::green::robin_constant;
use crate::error::{Error, Result};
use crate::semigroup::{check_main_condition, GeneratorSet, Word, DEFAULT_JULIA_TOLERANCE};

/// Samples above this size are thinned to this many points before the
/// quadratic diameter scan.
pub const DIAMETER_SUBSAMPLE: usize = 1 << 14;

/// Indices of `m` greedy Leja points of `points`: start at the point of
/// largest modulus, then repeatedly take the point maximizing the product
/// of distances to those already chosen (ties go to the lower index).
pub fn leja_points(points: &[Complex64], m: usize) -> Result<Vec<usize>> {
    if m < 2 || points.len() < m {
        return Err(Error::InsufficientPoints { needed: m.max(2), got: points.len() });
    }
    let first = argmax(points.iter().map(|z| z.norm()));
    let mut chosen = vec![first];
    let mut log_sums = vec![0.0f64; points.len()];
    let mut last = points[first];
    for _ in 1..m {
        log_sums.par_iter_mut().zip(points.par_iter()).for_each(|(s, &z)| *s += (z - last).norm().ln());
        let next = argmax(log_sums.iter().copied());
        chosen.push(next);
        last = points[next];
    }
    Ok(chosen)
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (k, v) in values.enumerate() {
        if v > best.1 {
            best = (k, v);
        }
    }
    best.0
}

fn mean_log_distance(points: &[Complex64]) -> f64 {
    let m = points.len();
    let mut sum = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            sum += (points[i] - points[j]).norm().ln();
        }
    }
    2.0 * sum / (m * (m - 1)) as f64
}

/// `(∏_{i<j} |x_i - x_j|)^{2/(m(m-1))}` over `m` Leja points of `points`.
pub fn capacity_leja(points: &[Complex64], m: usize) -> Result<f64> {
    let idx = leja_points(points, m)?;
    let chosen: Vec<Complex64> = idx.iter().map(|&k| points[k]).collect();
    Ok(mean_log_distance(&chosen).exp())
}

/// `log cap - mean(Q)` with `q_values[k]` the field at the `k`-th Leja point,
/// in the order returned by [`leja_points`].
pub fn f_functional(points: &[Complex64], q_values: &[f64], m: usize) -> Result<f64> {
    if q_values.len() != m {
        return Err(Error::LengthMismatch { expected: m, got: q_values.len() });
    }
    let log_cap = capacity_leja(points, m)?.ln();
    Ok(log_cap - q_values.iter().sum::<f64>() / m as f64)
}

/// [`f_functional`] with the field evaluated at the selected Leja points.
pub fn f_functional_with(points: &[Complex64], m: usize, q: impl Fn(Complex64) -> f64) -> Result<f64> {
    let idx = leja_points(points, m)?;
    let q_values: Vec<f64> = idx.iter().map(|&k| q(points[k])).collect();
    f_functional(points, &q_values, m)
}

/// Largest pairwise distance; evenly strided subsample above
/// [`DIAMETER_SUBSAMPLE`] points.
pub fn diameter(points: &[Complex64]) -> f64 {
    let stride = points.len().div_ceil(DIAMETER_SUBSAMPLE).max(1);
    let pts: Vec<Complex64> = points.iter().step_by(stride).copied().collect();
    (0..pts.len())
        .into_par_iter()
        .map(|i| pts[i + 1..].iter().map(|&w| (pts[i] - w).norm()).fold(0.0, f64::max))
        .reduce(|| 0.0, f64::max)
}

/// Cap on the breadth-first frontier of the orbit searches.
const FRONTIER_CAP: usize = 1 << 20;

/// A word sending `z0` beyond the escape radius, found breadth first
/// with length at most `max_len`. Since the escape region is forward
/// invariant, such a word certifies an unbounded orbit.
pub fn orbit_witness(g: &GeneratorSet, z0: Complex64, max_len: usize) -> Option<Word> {
    let radius = g.escape_radius().radius;
    if !(z0.norm() <= radius) {
        return Some(Word::identity());
    }
    // (point, parent node, generator)
    let mut nodes: Vec<(Complex64, usize, usize)> = vec![(z0, usize::MAX, usize::MAX)];
    let mut level: Vec<usize> = vec![0];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(level.len() * g.len());
        for &parent in &level {
            let w = nodes[parent].0;
            for (i, p) in g.gens().iter().enumerate() {
                let child = p.eval(w);
                nodes.push((child, parent, i));
                let id = nodes.len() - 1;
                if !(child.norm() <= radius) {
                    let mut indices = Vec::new();
                    let mut k = id;
                    while k != 0 {
                        indices.push(nodes[k].2);
                        k = nodes[k].1;
                    }
                    return Some(Word::new(indices));
                }
                next.push(id);
            }
        }
        if next.len() > FRONTIER_CAP {
            return None;
        }
        level = next;
    }
    None
}

/// Largest clearance disc among a `64 x 64` grid of candidate centers over
/// the square of half-width `half_width` around `center`. A candidate
/// whose distance to every point is at least twice the candidate spacing
/// survives, and the answer is `(p, c/2)` for the best clearance `c`.
pub fn nondense_disc(points: &[Complex64], center: Complex64, half_width: f64) -> Option<(Complex64, f64)> {
    const RES: usize = 64;
    let spacing = 2.0 * half_width / (RES - 1) as f64;
    let origin = center - Complex64::new(half_width, half_width);
    let (best, clearance) = (0..RES * RES)
        .into_par_iter()
        .map(|k| {
            let p = origin + Complex64::new((k % RES) as f64 * spacing, (k / RES) as f64 * spacing);
            let d = points.iter().map(|&z| (z - p).norm()).fold(f64::INFINITY, f64::min);
            (k, d)
        })
        .reduce(|| (usize::MAX, f64::NEG_INFINITY), |a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a });
    if best == usize::MAX || !(clearance >= 2.0 * spacing) {
        return None;
    }
    let p = origin + Complex64::new((best % RES) as f64 * spacing, (best / RES) as f64 * spacing);
    Some((p, 0.5 * clearance))
}

/// A disc missed by the forward orbit of `z0`, sampled breadth first up to
/// `budget` points. Points beyond twice the escape radius are kept but not
/// expanded; their images only move further out.
pub fn nondense_witness(g: &GeneratorSet, z0: Complex64, budget: usize) -> Option<(Complex64, f64)> {
    if budget == 0 {
        return None;
    }
    let radius = g.escape_radius().radius;
    let half_width = (2.0 * radius).max(1.5 * z0.norm());
    let mut orbit = vec![z0];
    let mut queue = VecDeque::from([z0]);
    while let Some(w) = queue.pop_front() {
        if w.norm() > 2.0 * half_width {
            continue;
        }
        for p in g.gens() {
            if orbit.len() >= budget {
                break;
            }
            let child = p.eval(w);
            orbit.push(child);
            queue.push_back(child);
        }
        if orbit.len() >= budget {
            break;
        }
    }
    nondense_disc(&orbit, Complex64::new(0.0, 0.0), half_width)
}

/// Hypotheses under which the strict capacity and diameter bounds apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionFlags {
    pub orbit_unbounded: bool,
    pub orbit_nondense: bool,
    pub all_deg_ge_2: bool,
    pub main_condition: bool,
}

impl ConditionFlags {
    pub fn all(&self) -> bool {
        self.orbit_unbounded && self.orbit_nondense && self.all_deg_ge_2 && self.main_condition
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityOptions {
    pub leja_count: usize,
    pub orbit_max_len: usize,
    pub nondense_budget: usize,
    pub julia_tolerance: f64,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        Self { leja_count: 256, orbit_max_len: 24, nondense_budget: 4096, julia_tolerance: DEFAULT_JULIA_TOLERANCE }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport {
    pub robin_f: f64,
    /// `exp(-F_G)`.
    pub lower_bound: f64,
    pub cap_estimate: f64,
    pub diam_estimate: f64,
    /// `2 exp(-F_G)`.
    pub diam_lower: f64,
    pub flags: ConditionFlags,
    /// Evaluated, not asserted: only meaningful when every flag holds.
    pub cap_exceeds_lower: bool,
    pub diam_exceeds_lower: bool,
    pub z0: Complex64,
    pub orbit_word: Option<Word>,
    pub nondense_disc: Option<(Complex64, f64)>,
    pub main_condition_explanation: String,
    pub leja_count: usize,
    pub sample_size: usize,
}

pub fn capacity_report(g: &GeneratorSet, julia: &[Complex64], z0: Complex64) -> Result<CapacityReport> {
    capacity_report_with(g, julia, z0, &CapacityOptions::default())
}

pub fn capacity_report_with(
    g: &GeneratorSet,
    julia: &[Complex64],
    z0: Complex64,
    opts: &CapacityOptions,
) -> Result<CapacityReport> {
    let robin_f = robin_constant(g);
    let lower_bound = (-robin_f).exp();
    let leja_count = opts.leja_count.min(julia.len());
    let cap_estimate = capacity_leja(julia, leja_count)?;
    let diam_estimate = diameter(julia);

    let orbit_word = orbit_witness(g, z0, opts.orbit_max_len);
    let disc = nondense_witness(g, z0, opts.nondense_budget);
    let main = check_main_condition(g, julia, opts.julia_tolerance)?;
    let flags = ConditionFlags {
        orbit_unbounded: orbit_word.is_some(),
        orbit_nondense: disc.is_some(),
        all_deg_ge_2: g.all_degrees_at_least_two(),
        main_condition: main.holds,
    };

    Ok(CapacityReport {
        robin_f,
        lower_bound,
        cap_estimate,
        diam_estimate,
        diam_lower: 2.0 * lower_bound,
        flags,
        cap_exceeds_lower: cap_estimate > lower_bound,
        diam_exceeds_lower: diam_estimate > 2.0 * lower_bound,
        z0,
        orbit_word,
        nondense_disc: disc,
        main_condition_explanation: main.explanation,
        leja_count,
        sample_size: julia.len(),
    })
}
