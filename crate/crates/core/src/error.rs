//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum WfError {
    #[error("non-invertible leading coefficient: {0}")]
    NonInvertible(String),

    #[error("empty precision window: {0}")]
    EmptyPrecision(String),

    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("not rationally diagonalizable: {0}")]
    NotDiagonalizable(String),

    #[error("operator is not Clifford-linear: {0}")]
    NotCliffordLinear(String),

    #[error("non-integrable integrand class: {0}")]
    NonIntegrable(String),

    #[error("missing Pontryagin data for partition {0}")]
    MissingPartition(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type WfResult<T> = Result<T, WfError>;
