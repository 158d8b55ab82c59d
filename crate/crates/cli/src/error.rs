use std::path::PathBuf;

use polysemi_core::Error as CoreError;
use thiserror::Error;

/// Every failure of a run, one exit code each.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed configuration: {0}")]
    Config(String),
    #[error("inadmissible generators: {0}")]
    Inadmissible(String),
    #[error("numerical failure in {operation}: {message}")]
    Numerical { operation: &'static str, message: String },
    #[error("cannot write {}: {message}", path.display())]
    Unwritable { path: PathBuf, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Inadmissible(_) => 3,
            CliError::Numerical { .. } => 4,
            CliError::Unwritable { .. } => 5,
        }
    }

    /// Classify a core error raised by `operation`.
    pub fn from_core(operation: &'static str) -> impl Fn(CoreError) -> CliError {
        move |e| {
            if e.is_inadmissible() {
                CliError::Inadmissible(e.to_string())
            } else if let CoreError::InvalidConfig(msg) = e {
                CliError::Config(msg)
            } else {
                CliError::Numerical { operation, message: e.to_string() }
            }
        }
    }
}
