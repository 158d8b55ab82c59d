use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::measure::{Atom, EmpiricalMeasure};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, tags, AUXILIARY_INDEX};
use crate::semigroup::{GeneratorSet, WORD_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// All `D^n` multiplicity-counted leaves.
    Exhaustive,
    /// `samples` independent backward walks.
    Stochastic { samples: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleConfig {
    pub base_point: Complex64,
    pub depth: usize,
    pub mode: SampleMode,
    pub seed: u64,
    /// Selects the family of random streams; see [`crate::rng`].
    pub stream_tag: u64,
}

impl SampleConfig {
    pub fn exhaustive(base_point: Complex64, depth: usize) -> Self {
        Self { base_point, depth, mode: SampleMode::Exhaustive, seed: 0, stream_tag: tags::MEASURE }
    }

    pub fn stochastic(base_point: Complex64, depth: usize, samples: usize, seed: u64) -> Self {
        Self { base_point, depth, mode: SampleMode::Stochastic { samples }, seed, stream_tag: tags::MEASURE }
    }

    pub fn with_tag(mut self, stream_tag: u64) -> Self {
        self.stream_tag = stream_tag;
        self
    }

    fn check(&self, g: &GeneratorSet) -> Result<()> {
        if !self.base_point.is_finite() {
            return Err(Error::InvalidConfig("base point must be finite".into()));
        }
        match self.mode {
            SampleMode::Exhaustive => check_leaf_cap(g, self.depth),
            SampleMode::Stochastic { samples: 0 } => {
                Err(Error::InvalidConfig("stochastic sampling needs at least one sample".into()))
            }
            SampleMode::Stochastic { .. } => Ok(()),
        }
    }
}

fn check_leaf_cap(g: &GeneratorSet, n: usize) -> Result<()> {
    let count = g.leaf_count(n);
    if count > WORD_CAP {
        return Err(Error::EnumerationCap { count, cap: WORD_CAP });
    }
    Ok(())
}

/// Default base point: uniform on the circle `|z| = 2 R_esc`, drawn from
/// the `(seed, tag)` auxiliary stream. The bad base points form a polar
/// set, which has zero length on the circle, so a random choice avoids it
/// almost surely.
pub fn default_base_point(g: &GeneratorSet, seed: u64, tag: u64) -> Complex64 {
    let mut rng = stream_rng(seed, tag, AUXILIARY_INDEX);
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(2.0 * g.escape_radius().radius, theta)
}

/// `Σ_i Σ_{x ∈ g_i⁻¹(a)} δ_x`, multiplicities as weights. Total mass `D`.
pub fn pullback_dirac(g: &GeneratorSet, a: Complex64) -> Result<EmpiricalMeasure> {
    let atoms = preimages(g, a)?
        .into_iter()
        .map(|(location, m)| Atom { location, weight: m as f64 })
        .collect();
    EmpiricalMeasure::new(atoms)
}

fn preimages(g: &GeneratorSet, a: Complex64) -> Result<Vec<(Complex64, u64)>> {
    let mut out = Vec::new();
    for p in g.gens() {
        for r in &p.roots(a)? {
            if !r.location.is_finite() {
                return Err(Error::InfiniteLeaf);
            }
            out.push((r.location, r.multiplicity as u64));
        }
    }
    Ok(out)
}

/// Leaves of the `n`-fold pullback of `δ_a` with multiplicities; the
/// multiplicities sum to `D^n`. Parallel over the first level, output
/// order is fixed.
pub fn pullback_leaves(g: &GeneratorSet, a: Complex64, n: usize) -> Result<Vec<(Complex64, u64)>> {
    check_leaf_cap(g, n)?;
    if n == 0 {
        return Ok(vec![(a, 1)]);
    }

    fn expand(g: &GeneratorSet, z: Complex64, mult: u64, depth: usize, out: &mut Vec<(Complex64, u64)>) -> Result<()> {
        if depth == 0 {
            out.push((z, mult));
            return Ok(());
        }
        for (x, m) in preimages(g, z)? {
            expand(g, x, mult * m, depth - 1, out)?;
        }
        Ok(())
    }

    let first = preimages(g, a)?;
    let chunks: Vec<Vec<(Complex64, u64)>> = first
        .par_iter()
        .map(|&(x, m)| {
            let mut out = Vec::new();
            expand(g, x, m, n - 1, &mut out)?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(chunks.concat())
}

/// One backward walk of `depth` steps. Each step draws `k` uniformly from
/// `0..D`; `k` selects generator `i` with probability `d_i/D` and then a
/// root slot uniformly, so every multiplicity-counted leaf has probability
/// exactly `D^{-n}`.
fn walk<R: Rng>(
    g: &GeneratorSet,
    offsets: &[usize],
    start: Complex64,
    depth: usize,
    rng: &mut R,
    mut visit: impl FnMut(usize, Complex64),
) -> Result<Complex64> {
    let mut z = start;
    for level in 1..=depth {
        let k = rng.random_range(0..g.total_degree());
        let i = offsets.partition_point(|&o| o <= k) - 1;
        let roots = g.gens()[i].roots(z)?;
        z = roots.by_slot(k - offsets[i]).ok_or(Error::InfiniteLeaf)?;
        if !z.is_finite() {
            return Err(Error::InfiniteLeaf);
        }
        visit(level, z);
    }
    Ok(z)
}

fn offsets(g: &GeneratorSet) -> Vec<usize> {
    let mut acc = 0;
    g.degrees()
        .iter()
        .map(|d| {
            let o = acc;
            acc += d;
            o
        })
        .collect()
}

/// The normalized `n`-fold pullback `D^{-n} (F*)^n δ_a`, exactly or by
/// sampling.
pub fn iterate_pullback(g: &GeneratorSet, cfg: &SampleConfig) -> Result<EmpiricalMeasure> {
    cfg.check(g)?;
    match cfg.mode {
        SampleMode::Exhaustive => {
            let scale = (g.total_degree() as f64).powi(cfg.depth as i32);
            let atoms = pullback_leaves(g, cfg.base_point, cfg.depth)?
                .into_iter()
                .map(|(location, m)| Atom { location, weight: m as f64 / scale })
                .collect();
            Ok(EmpiricalMeasure::from_atoms_unchecked(atoms))
        }
        SampleMode::Stochastic { samples } => {
            let offsets = offsets(g);
            let weight = 1.0 / samples as f64;
            let atoms = (0..samples as u64)
                .into_par_iter()
                .map(|k| {
                    let mut rng = stream_rng(cfg.seed, cfg.stream_tag, k);
                    let location = walk(g, &offsets, cfg.base_point, cfg.depth, &mut rng, |_, _| {})?;
                    Ok(Atom { location, weight })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(EmpiricalMeasure::from_atoms_unchecked(atoms))
        }
    }
}

/// Points visited at levels `burn_in + 1 ..= depth` of every walk, walk by
/// walk. These accumulate on the support of the invariant measure.
pub fn julia_sample(g: &GeneratorSet, cfg: &SampleConfig, burn_in: usize) -> Result<Vec<Complex64>> {
    cfg.check(g)?;
    let SampleMode::Stochastic { samples } = cfg.mode else {
        return Err(Error::InvalidConfig("Julia sampling needs stochastic mode".into()));
    };
    if burn_in >= cfg.depth {
        return Err(Error::InvalidConfig(format!(
            "burn-in {burn_in} leaves no levels at depth {}",
            cfg.depth
        )));
    }
    let offsets = offsets(g);
    let chunks = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(cfg.seed, cfg.stream_tag, k);
            let mut points = Vec::with_capacity(cfg.depth - burn_in);
            walk(g, &offsets, cfg.base_point, cfg.depth, &mut rng, |level, z| {
                if level > burn_in {
                    points.push(z);
                }
            })?;
            Ok(points)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(chunks.concat())
}
