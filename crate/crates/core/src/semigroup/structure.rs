use std::cmp::Ordering;

use super::{GeneratorSet, WORD_CAP};
use crate::error::{Error, Result};
use crate::poly::ComplexPoly;

/// Coefficientwise relative tolerance for deciding that a word equals a generator.
pub const REDUNDANCY_TOLERANCE: f64 = 1e-9;

/// The smallest `n₀ >= 2` such that every representation of `target` as a
/// word in `g` has length below `n₀`.
///
/// A representation uses at most `m = ⌊log₂ deg(target)⌋` factors of degree
/// `>= 2`; with `Λ₁` the smallest `|Λ|` among affine generators, `Λ₂` the
/// smallest among the others and `d` the largest degree, a word of length
/// `n > m` has `|Λ| >= Λ₁^{n-m} Λ₂^{1+d+⋯+d^{m-1}}` (last factor dropped
/// when `Λ₂ >= 1`).
pub fn representation_bound(g: &GeneratorSet, target: &ComplexPoly) -> usize {
    bound_for(g.gens(), target)
}

fn bound_for(gens: &[ComplexPoly], target: &ComplexPoly) -> usize {
    let deg_target = target.degree().max(1);
    let m = (usize::BITS - 1 - deg_target.leading_zeros()) as usize;

    let affine_min = gens
        .iter()
        .filter(|h| h.degree() == 1)
        .map(|h| h.leading().norm())
        .fold(f64::INFINITY, f64::min);
    if !affine_min.is_finite() {
        return (m + 1).max(2);
    }

    let expanding_min = gens
        .iter()
        .filter(|h| h.degree() >= 2)
        .map(|h| h.leading().norm())
        .fold(f64::INFINITY, f64::min);
    let d = gens.iter().map(ComplexPoly::degree).max().unwrap_or(1) as f64;
    let log_l2_part = if expanding_min < 1.0 {
        let geometric: f64 = (0..m).map(|k| d.powi(k as i32)).sum();
        geometric * expanding_min.ln()
    } else {
        0.0
    };

    let log_target = target.leading().norm().ln();
    let log_l1 = affine_min.ln();
    let lower = |n: usize| (n - m) as f64 * log_l1 + log_l2_part;

    let estimate = ((log_target - log_l2_part) / log_l1).floor();
    let mut n = if estimate.is_finite() && estimate > 0.0 { m + estimate as usize } else { m + 1 };
    n = n.max(m + 1);
    while n > m + 1 && lower(n - 1) > log_target {
        n -= 1;
    }
    while lower(n) <= log_target {
        n += 1;
    }
    n.max(2)
}

fn canonical_cmp(a: &ComplexPoly, b: &ComplexPoly) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

/// Does `target` equal some word of length `>= 2` in `others`?
fn is_representable(others: &[ComplexPoly], target: &ComplexPoly, budget: &mut u128) -> Option<bool> {
    if others.is_empty() {
        return Some(false);
    }
    let max_len = bound_for(others, target) - 1;
    if max_len < 2 {
        return Some(false);
    }
    let deg_target = target.degree();

    fn search(
        others: &[ComplexPoly],
        target: &ComplexPoly,
        deg_target: usize,
        inner: &ComplexPoly,
        len: usize,
        max_len: usize,
        budget: &mut u128,
    ) -> Option<bool> {
        for h in others {
            let degree = h.degree() * inner.degree();
            if degree > deg_target || !deg_target.is_multiple_of(degree) {
                continue;
            }
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            let word = h.compose(inner).ok()?;
            if len + 1 >= 2
                && degree == deg_target
                && word.approx_eq(target, REDUNDANCY_TOLERANCE)
            {
                return Some(true);
            }
            if len + 1 < max_len
                && search(others, target, deg_target, &word, len + 1, max_len, budget)?
            {
                return Some(true);
            }
        }
        Some(false)
    }

    search(others, target, deg_target, &ComplexPoly::identity(), 0, max_len, budget)
}

/// The unique minimal generating set of the semigroup generated by `g`.
///
/// Duplicates are dropped, then generators expressible as words of length
/// `>= 2` in the remaining ones are removed one at a time. The result is
/// listed in a canonical order (degree, then coefficients), so it does not
/// depend on the input ordering.
pub fn minimal_generating_set(g: &GeneratorSet) -> Result<GeneratorSet> {
    let mut items: Vec<(usize, ComplexPoly)> = g.gens().iter().cloned().enumerate().collect();
    items.sort_by(|a, b| canonical_cmp(&a.1, &b.1));

    let mut unique: Vec<(usize, ComplexPoly)> = Vec::with_capacity(items.len());
    for item in items {
        if !unique.iter().any(|u| u.1.approx_eq(&item.1, REDUNDANCY_TOLERANCE)) {
            unique.push(item);
        }
    }

    let mut budget = WORD_CAP;
    'outer: loop {
        for k in 0..unique.len() {
            let others: Vec<ComplexPoly> = unique
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, u)| u.1.clone())
                .collect();
            match is_representable(&others, &unique[k].1, &mut budget) {
                Some(true) => {
                    unique.remove(k);
                    continue 'outer;
                }
                Some(false) => {}
                None => return Err(Error::UndecidedRedundancy { index: unique[k].0 }),
            }
        }
        break;
    }
    GeneratorSet::validate(unique.into_iter().map(|u| u.1).collect())
}
