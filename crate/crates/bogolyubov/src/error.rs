//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by spectral constructions, special-function evaluation,
/// quadrature, and the asymptotic-expansion engine.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error in {op}: {message}")]
    Domain { op: &'static str, message: String },

    /// A requested tolerance could not be met; carries the best value found.
    #[error("accuracy not reached in {op}: achieved {achieved:e}, requested {requested:e}")]
    Accuracy {
        op: &'static str,
        requested: f64,
        achieved: f64,
        /// Best available value despite the missed tolerance.
        value: f64,
    },

    /// Operation called with an operator pair of the wrong kind.
    #[error("kind mismatch: expected {expected} spectra, got {found}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    /// Parameter combination outside the supported model families.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Malformed input data (shape mismatches, non-finite entries, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Dense linear algebra failed to converge.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A least-squares fit had a (numerically) singular normal matrix.
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    /// (De)serialization of spectral documents failed.
    #[error("serialization error: {0}")]
    Serialization(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
