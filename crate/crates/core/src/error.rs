use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("composed degree {degree} exceeds the degree cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("root solver did not converge after {iterations} iterations (residual {residual:e})")]
    SolverFailure { residual: f64, iterations: usize },

    #[error("cannot solve p(z) = a for a constant polynomial")]
    ConstantPolynomial,

    #[error("local order at {point} is numerically indeterminate")]
    IndeterminateOrder { point: Complex64 },

    #[error("generator set is empty")]
    EmptyGeneratorSet,

    #[error("generator {index} is constant")]
    DegenerateGenerator { index: usize },

    #[error(
        "generator {index} has degree one with |a| = {modulus} <= 1, so infinity is not an attracting fixed point"
    )]
    InadmissibleGenerator { index: usize, modulus: f64 },

    #[error("no generator has degree >= 2")]
    MissingExpandingGenerator,

    #[error("{count} words exceed the enumeration cap {cap}; use stochastic sampling")]
    EnumerationCap { count: u128, cap: u128 },

    #[error("could not decide whether generator {index} is redundant within the word cap")]
    UndecidedRedundancy { index: usize },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("backward walk produced a non-finite leaf")]
    InfiniteLeaf,

    #[error("need at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("need at least {needed} atoms, got {got}")]
    InsufficientAtoms { needed: usize, got: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

impl Error {
    /// True for errors that reject the generators themselves rather than a
    /// numerical step.
    pub fn is_inadmissible(&self) -> bool {
        matches!(
            self,
            Error::EmptyGeneratorSet
                | Error::DegenerateGenerator { .. }
                | Error::InadmissibleGenerator { .. }
                | Error::MissingExpandingGenerator
        )
    }
}
