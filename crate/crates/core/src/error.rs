use alloc::string::String;

/// Errors reported by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A potential, grid or configuration violates its documented invariants.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A parameter lies outside the validity range of the operation.
    #[error("outside validity range: {0}")]
    OutOfRange(String),
    /// Picard iteration failed to contract.
    #[error("fixed-point iteration did not contract: {0}")]
    NonContraction(String),
    /// The adaptive integrator could not meet its tolerance.
    #[error("step-size failure: {0}")]
    StepSize(String),
    /// The Wronskian is too small to invert (bound state or resonance).
    #[error("wronskian too small: |W| = {0:e}")]
    SmallWronskian(f64),
    /// A quadrature or extrapolation did not converge.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    /// The sampled data does not support the requested fit.
    #[error("fit failure: {0}")]
    Fit(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => { $crate::Error::Invalid(alloc::format!($($arg)*)) };
}
pub(crate) use invalid;
