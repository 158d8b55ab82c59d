//! Dense complex polynomials in ascending coefficient order.
//!
//! Composed words of a semigroup are never materialized beyond
//! [`DEFAULT_DEGREE_CAP`]; evaluation along words is done pointwise in
//! [`crate::semigroup`].

mod roots;

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use roots::{Root, RootSet, CLUSTER_RADIUS};

/// Largest degree [`ComplexPoly::compose`] will materialize.
pub const DEFAULT_DEGREE_CAP: usize = 4096;

/// Taylor coefficients below this fraction of the largest one count as zero
/// when computing local orders.
pub const ORDER_THRESHOLD: f64 = 1e-9;

/// A univariate polynomial with complex coefficients; `coeffs[k]` multiplies `z^k`.
///
/// Trailing zero coefficients are trimmed on construction, so the last
/// coefficient is the leading coefficient unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The identity map `z`.
    pub fn identity() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial and constants both report 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// The leading coefficient, zero for the zero polynomial.
    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `(p(z), p'(z))` in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `sum |a_k| |z|^k`, the natural scale of rounding errors in `eval`.
    pub fn abs_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        Self::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        + other.coeffs.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `p - a`.
    pub fn sub_constant(&self, a: Complex64) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(-a);
        } else {
            coeffs[0] -= a;
        }
        Self::new(coeffs)
    }

    /// `self ∘ inner` with the default degree cap.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.compose_capped(inner, DEFAULT_DEGREE_CAP)
    }

    /// `self ∘ inner`, refusing to build anything above `cap`.
    pub fn compose_capped(&self, inner: &Self, cap: usize) -> Result<Self> {
        let degree = self.degree() * inner.degree();
        if degree > cap {
            return Err(Error::DegreeCap { degree, cap });
        }
        let mut acc = Self::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c));
        }
        Ok(acc)
    }

    /// Coefficients of `p(x + h)` in powers of `h`, i.e. `p^{(k)}(x) / k!`.
    pub fn taylor_coefficients(&self, x: Complex64) -> Vec<Complex64> {
        let mut c = self.coeffs.clone();
        let n = self.degree();
        for i in 0..n {
            for j in (i..n).rev() {
                let next = c[j + 1];
                c[j] += x * next;
            }
        }
        c
    }

    /// The order of `p` at `x`: the index of the first nonzero Taylor
    /// coefficient past the constant term. Equals 1 away from critical points.
    pub fn local_order(&self, x: Complex64) -> Result<usize> {
        let taylor = self.taylor_coefficients(x);
        let scale = taylor.iter().skip(1).map(|c| c.norm()).fold(0.0, f64::max);
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::IndeterminateOrder { point: x });
        }
        let threshold = ORDER_THRESHOLD * scale;
        taylor
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, c)| c.norm() > threshold)
            .map(|(m, _)| m)
            .ok_or(Error::IndeterminateOrder { point: x })
    }

    /// All solutions of `p(z) = a`, clustered into multiplicities.
    pub fn roots(&self, a: Complex64) -> Result<RootSet> {
        if self.degree() == 0 {
            return Err(Error::ConstantPolynomial);
        }
        roots::solve(&self.sub_constant(a))
    }

    /// Zeros of `p'` with multiplicities; empty below degree 2.
    pub fn critical_points(&self) -> Result<RootSet> {
        if self.degree() < 2 {
            return Ok(RootSet::default());
        }
        self.derivative().roots(Complex64::new(0.0, 0.0))
    }

    /// Same degree and every coefficient within `rel_tol * max|coeff|`.
    pub fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        if self.degree() != other.degree() || self.is_zero() != other.is_zero() {
            return false;
        }
        let scale = self.max_coeff_abs().max(other.max_coeff_abs());
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| (a - b).norm() <= rel_tol * scale)
    }
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}
