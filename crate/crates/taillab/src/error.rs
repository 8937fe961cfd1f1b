//! Run failures and their process exit codes.

use taillab_core::Error;

/// Why a command did not complete.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Failure {
    /// Malformed config, missing keys, unusable output directory.
    #[error("validation error: {0}")]
    Validation(String),
    /// The potential has a bound state or a zero-energy resonance.
    #[error("spectral assumption violated: {0}")]
    Spectral(String),
    /// A numerical stage failed (non-convergence, fit failure, …).
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl Failure {
    /// Validation failure with a message.
    pub fn validation(msg: impl Into<String>) -> Self {
        Self::Validation(msg.into())
    }

    /// Numerical failure with a message.
    pub fn numeric(msg: impl Into<String>) -> Self {
        Self::Numeric(msg.into())
    }

    /// Process exit code: 2 validation, 3 spectral, 4 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => 2,
            Failure::Spectral(_) => 3,
            Failure::Numeric(_) => 4,
        }
    }

    /// Attach the stage name to the message.
    pub fn in_stage(self, stage: &str) -> Self {
        match self {
            Failure::Validation(m) => Failure::Validation(format!("stage `{stage}`: {m}")),
            Failure::Spectral(m) => Failure::Spectral(format!("stage `{stage}`: {m}")),
            Failure::Numeric(m) => Failure::Numeric(format!("stage `{stage}`: {m}")),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invalid(_) | Error::OutOfRange(_) => Failure::Validation(e.to_string()),
            Error::SmallWronskian(_) => Failure::Spectral(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Validation(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Validation(format!("csv: {e}"))
    }
}
