//! Command-line front end: JSON instance descriptions in, reports out.
//!
//! The binary has four modes: `run` (one instance, full report), `scan`
//! (one cyclotomic instance over all primes up to a bound), `census` (all
//! CM types against all cyclic decomposition classes of one field) and
//! `oracle` (elliptic-curve point-count cross-check).

pub mod census;
pub mod report;
pub mod scan;
pub mod spec;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// A problem with the instance description; the path names the
    /// offending field of the JSON document.
    #[error("{path}: {message}")]
    Spec { path: String, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    /// An invariant the engine itself guarantees was violated.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    pub fn spec(path: &str, message: impl ToString) -> Self {
        CliError::Spec {
            path: path.to_string(),
            message: message.to_string(),
        }
    }

    /// `1` for bad input, `2` for internal invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 2,
            _ => 1,
        }
    }
}

/// Renders an exact slope as `numerator/denominator`, e.g. `1/2`, `0/1`.
pub fn fraction(slope: cmnewton_core::Rational64) -> String {
    format!("{}/{}", slope.numer(), slope.denom())
}
