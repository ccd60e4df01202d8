//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument (wrong parity, out-of-range weight, bad cutoff, ...).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Evaluation requested at a pole of the function.
    #[error("pole: {0}")]
    Pole(String),

    /// Point outside the domain where the formula or method is valid.
    #[error("domain violation: {0}")]
    Domain(String),

    /// Iteration or quadrature failed to converge within its budget.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Request exceeds the supported desk-scale range.
    #[error("capability limit: {0}")]
    Capability(String),

    /// A power series was not computed to a high enough order.
    #[error("truncation order too small: need at least {required}, have {available}")]
    Truncation { required: usize, available: usize },

    /// An eigenform does not carry enough Fourier coefficients.
    #[error("not enough coefficients: need {required}, have {available}")]
    Coefficients { required: usize, available: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
