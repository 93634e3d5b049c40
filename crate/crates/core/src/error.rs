use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the approximation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument {value} outside [-1, 1]")]
    Domain { value: f64 },

    #[error("invalid harmonic index (k={k}, j={j}); need 1 <= j <= 2k+1")]
    InvalidIndex { k: usize, j: usize },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("Gauss-Legendre root finding failed to converge for {nodes} nodes")]
    NodeConvergence { nodes: usize },

    #[error("cubature rule is exact to degree {have}, need at least {need}")]
    InsufficientExactness { have: usize, need: usize },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("length mismatch: {what} has {got} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid penalization weights: {0}")]
    InvalidWeights(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("linear system is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("system size {size} exceeds oracle limit (degree {limit})")]
    SystemTooLarge { size: usize, limit: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed file {path}: {reason}")]
    Format { path: PathBuf, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
