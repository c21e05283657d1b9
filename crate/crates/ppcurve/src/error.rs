//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by model construction, evaluation and experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    /// A model parameter violates its constraint (e.g. `sigma <= 0`).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An argument is outside the operation's domain (e.g. `u` not in (0,1)).
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation was called on an object in the wrong state
    /// (e.g. density of a curve that is not absolutely continuous).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A numerical procedure failed (Cholesky breakdown, non-finite value).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A data file could not be parsed; carries the 1-based line number.
    #[error("data error at line {line}: {message}")]
    Data { line: u64, message: String },

    /// Failure parsing a margin or copula specification string.
    #[error("spec parse error: {0}")]
    SpecParse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
