//! Potential theory for finitely generated polynomial semigroups.
//!
//! The crate samples the invariant measure of a generator set by backward
//! iteration, evaluates its logarithmic potential against the finite-depth
//! dynamical Green's function, and checks the closed-form modified Robin
//! constant together with capacity and diameter bounds for the Julia set.
//!
//! Layers, bottom up:
//! - [`poly`]: dense complex polynomials and root finding;
//! - [`semigroup`]: generator sets, words, minimal generating sets, escape
//!   radii and critical-point data;
//! - [`dynamics`]: Dirac pullbacks, exhaustive and stochastic backward
//!   iteration, Julia sampling and the disc-count bound;
//! - [`potential`]: potentials, energies, Green's functions, capacity
//!   estimates and the verification reports.

pub mod dynamics;
pub mod error;
pub mod poly;
pub mod potential;
pub mod rng;
pub mod semigroup;

pub use num_complex::Complex64;

pub use dynamics::{EmpiricalMeasure, SampleConfig, SampleMode};
pub use error::{Error, Result};
pub use poly::{ComplexPoly, Root, RootSet};
pub use potential::{CapacityReport, GridField, GridSpec, IdentityReport};
pub use semigroup::{CriticalData, EscapeData, GeneratorSet, Word};
