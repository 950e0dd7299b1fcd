//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a mathematical precondition (empty set, k out of range, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Dimensions of the arguments do not agree.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A partition is not a valid plan for the given universe.
    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    /// Exhaustive search refused because the instance is too large.
    #[error("instance has {size} vertices, above the enumeration cap of {cap}")]
    EnumerationCap { size: usize, cap: usize },

    /// A hypothesis of the certificate construction does not hold.
    #[error("certificate refused: {0}")]
    CertificateRefused(String),

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("invalid input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
