//! Finitely generated polynomial semigroups: generator sets, words and
//! the structural algorithms built on them.

mod critical;
mod escape;
mod structure;

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;

pub use critical::{
    check_main_condition, critical_sets, critical_star, is_common_center_form, select_kappa,
    CriticalData, MainCondition, MainConditionReason, DEFAULT_JULIA_TOLERANCE,
};
pub use escape::{julia_derivative_bound, EscapeData};
pub use structure::{minimal_generating_set, representation_bound, REDUNDANCY_TOLERANCE};

/// Upper bound on the number of words any exhaustive enumeration will visit.
pub const WORD_CAP: u128 = 10_000_000;

/// A validated generating set: every generator is nonconstant, degree-one
/// generators `az + b` have `|a| > 1`, and at least one generator has
/// degree at least 2 (so `D > N`).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    gens: Vec<ComplexPoly>,
    degrees: Vec<usize>,
    total_degree: usize,
}

impl GeneratorSet {
    pub fn validate(gens: Vec<ComplexPoly>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGeneratorSet);
        }
        for (index, g) in gens.iter().enumerate() {
            match g.degree() {
                0 => return Err(Error::DegenerateGenerator { index }),
                1 => {
                    let modulus = g.leading().norm();
                    if !(modulus > 1.0) {
                        return Err(Error::InadmissibleGenerator { index, modulus });
                    }
                }
                _ => {}
            }
            if g.coeffs().iter().any(|c| !c.is_finite()) {
                return Err(Error::DegenerateGenerator { index });
            }
        }
        if gens.iter().all(|g| g.degree() < 2) {
            return Err(Error::MissingExpandingGenerator);
        }
        let degrees: Vec<usize> = gens.iter().map(ComplexPoly::degree).collect();
        let total_degree = degrees.iter().sum();
        Ok(Self { gens, degrees, total_degree })
    }

    pub fn gens(&self) -> &[ComplexPoly] {
        &self.gens
    }

    /// Number of generators `N`.
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Sum of the generator degrees, `D`.
    pub fn total_degree(&self) -> usize {
        self.total_degree
    }

    /// `D / N`, always greater than 1.
    pub fn ratio(&self) -> f64 {
        self.total_degree as f64 / self.len() as f64
    }

    pub fn all_degrees_at_least_two(&self) -> bool {
        self.degrees.iter().all(|&d| d >= 2)
    }

    /// `N^n`, saturating.
    pub fn word_count(&self, n: usize) -> u128 {
        checked_pow(self.len() as u128, n)
    }

    /// `D^n`, saturating.
    pub fn leaf_count(&self, n: usize) -> u128 {
        checked_pow(self.total_degree as u128, n)
    }

    pub(crate) fn check_word_cap(&self, n: usize) -> Result<()> {
        let count = self.word_count(n);
        if count > WORD_CAP {
            return Err(Error::EnumerationCap { count, cap: WORD_CAP });
        }
        Ok(())
    }

    /// Every word of length `n` in lexicographic order.
    pub fn enumerate_words(&self, n: usize) -> Result<Words> {
        self.check_word_cap(n)?;
        Ok(Words { base: self.len(), digits: vec![0; n], done: false })
    }

    /// Evaluate the word at `z` without building its coefficients.
    ///
    /// Overflow yields [`OVERFLOW_MARKER`], which compares as escaped.
    pub fn word_eval(&self, word: &Word, z: Complex64) -> Complex64 {
        let mut w = z;
        for &i in word.indices().iter().rev() {
            w = self.gens[i].eval(w);
            if !w.is_finite() {
                return OVERFLOW_MARKER;
            }
        }
        w
    }

    /// Materialize the composed polynomial of a word.
    pub fn compose_word(&self, word: &Word) -> Result<ComplexPoly> {
        word.indices()
            .iter()
            .rev()
            .try_fold(ComplexPoly::identity(), |acc, &i| self.gens[i].compose(&acc))
    }

    /// `|Λ|` of a word via the product formula
    /// `Λ(g_n ∘ … ∘ g_1) = Λ(g_n) Λ(g_{n-1})^{d_n} ⋯ Λ(g_1)^{d_2⋯d_n}`.
    pub fn word_leading_abs(&self, word: &Word) -> f64 {
        let mut exponent = 1.0;
        let mut log_abs = 0.0;
        for &i in word.indices() {
            log_abs += exponent * self.gens[i].leading().norm().ln();
            exponent *= self.degrees[i] as f64;
        }
        log_abs.exp()
    }

    /// `|Λ(g_1) ⋯ Λ(g_N)|`.
    pub fn leading_product_abs(&self) -> f64 {
        self.gens.iter().map(|g| g.leading().norm()).product()
    }
}

/// Returned by [`GeneratorSet::word_eval`] when evaluation overflows.
pub const OVERFLOW_MARKER: Complex64 = Complex64::new(f64::INFINITY, 0.0);

fn checked_pow(base: u128, n: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..n {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// A word `g_{i_n} ∘ ⋯ ∘ g_{i_1}`, stored in composition order: the last
/// index is applied first. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(indices: Vec<usize>) -> Self {
        Self(indices)
    }

    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("g{i}")).collect();
        write!(f, "{}", parts.join("∘"))
    }
}

/// Lexicographic odometer over `{0..N}^n`.
#[derive(Debug, Clone)]
pub struct Words {
    base: usize,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for Words {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let out = Word(self.digits.clone());
        let mut k = self.digits.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.digits[k] += 1;
            if self.digits[k] < self.base {
                break;
            }
            self.digits[k] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn set(gens: &[&[f64]]) -> GeneratorSet {
        GeneratorSet::validate(gens.iter().map(|g| ComplexPoly::from_real(g)).collect()).unwrap()
    }

    #[test]
    fn validate_accepts_and_counts() {
        let g = set(&[&[0.0, 0.0, 1.0], &[0.0, 3.0]]);
        assert_eq!(g.len(), 2);
        assert_eq!(g.total_degree(), 3);
        assert!((g.ratio() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn validate_rejects_weak_affine() {
        let err = GeneratorSet::validate(vec![
            ComplexPoly::from_real(&[1.0, 0.5]),
            ComplexPoly::from_real(&[0.0, 0.0, 1.0]),
        ])
        .unwrap_err();
        assert_eq!(err, Error::InadmissibleGenerator { index: 0, modulus: 0.5 });
        assert!(err.is_inadmissible());
    }

    #[test]
    fn validate_rejects_missing_expanding_and_constants() {
        let err = GeneratorSet::validate(vec![ComplexPoly::from_real(&[0.0, 3.0])]).unwrap_err();
        assert_eq!(err, Error::MissingExpandingGenerator);
        let err = GeneratorSet::validate(vec![ComplexPoly::from_real(&[2.0])]).unwrap_err();
        assert_eq!(err, Error::DegenerateGenerator { index: 0 });
        assert_eq!(GeneratorSet::validate(vec![]).unwrap_err(), Error::EmptyGeneratorSet);
    }

    #[test]
    fn word_enumeration_counts() {
        let g = set(&[&[0.0, 0.0, 1.0], &[0.0, 3.0]]);
        assert_eq!(g.enumerate_words(3).unwrap().count(), 8);
        let words: Vec<Word> = g.enumerate_words(0).unwrap().collect();
        assert_eq!(words, vec![Word::identity()]);
        let words: Vec<Word> = g.enumerate_words(2).unwrap().collect();
        assert_eq!(
            words,
            vec![Word::new(vec![0, 0]), Word::new(vec![0, 1]), Word::new(vec![1, 0]), Word::new(vec![1, 1])]
        );
    }

    #[test]
    fn composed_degrees_sum_to_power() {
        let g = set(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0, 1.0]]);
        let mut degrees: Vec<usize> = g
            .enumerate_words(2)
            .unwrap()
            .map(|w| w.indices().iter().map(|&i| g.degrees()[i]).product())
            .collect();
        degrees.sort();
        assert_eq!(degrees, vec![4, 6, 6, 9]);
        assert_eq!(degrees.iter().sum::<usize>(), 25);
    }

    #[test]
    fn enumeration_cap() {
        let g = set(&[&[0.0, 0.0, 1.0], &[0.0, 3.0]]);
        assert!(matches!(g.enumerate_words(30), Err(Error::EnumerationCap { .. })));
    }

    #[test]
    fn word_eval_small_cases() {
        let g = set(&[&[0.0, 0.0, 1.0]]);
        assert_eq!(g.word_eval(&Word::new(vec![0, 0]), c(2.0, 0.0)), c(16.0, 0.0));
        assert_eq!(g.word_eval(&Word::identity(), c(0.3, 0.7)), c(0.3, 0.7));
        let huge = g.word_eval(&Word::new(vec![0; 12]), c(10.0, 0.0));
        assert_eq!(huge, OVERFLOW_MARKER);
    }

    #[test]
    fn word_eval_matches_materialized_composition() {
        let g = set(&[&[0.0, 0.0, 1.0], &[0.3, 1.5], &[-0.5, 0.0, 0.0, 1.0]]);
        let points: Vec<Complex64> =
            (0..50).map(|k| Complex64::from_polar(0.2 + 0.02 * k as f64, 0.37 * k as f64)).collect();
        for n in 1..=4 {
            for w in g.enumerate_words(n).unwrap() {
                let p = g.compose_word(&w).unwrap();
                for &z in &points {
                    let a = g.word_eval(&w, z);
                    let b = p.eval(z);
                    assert!((a - b).norm() <= 1e-8 * a.norm().max(1.0), "{w}: {a} vs {b}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn leading_product_formula(
            l0 in 0.2f64..3.0, l1 in 1.1f64..3.0, l2 in 0.2f64..3.0, n in 1usize..=4,
        ) {
            let g = set(&[&[0.1, 0.0, l0], &[0.5, l1], &[0.0, 1.0, 0.0, l2]]);
            for w in g.enumerate_words(n).unwrap() {
                let materialized = g.compose_word(&w).unwrap().leading().norm();
                let formula = g.word_leading_abs(&w);
                prop_assert!((materialized - formula).abs() <= 1e-9 * formula);
            }
        }
    }
}
