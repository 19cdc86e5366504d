use thiserror::Error;

/// Errors for distribution, channel and divergence construction and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(usize),

    #[error("non-finite entry at index {idx}: {value}")]
    NonFinite { idx: usize, value: f64 },

    #[error("negative entry at index {idx}: {value}")]
    Negative { idx: usize, value: f64 },

    #[error("not normalized (expected sum 1): sum={sum}")]
    NotNormalized { sum: f64 },

    #[error("row {row} of channel is invalid: {reason}")]
    InvalidRow { row: usize, reason: String },

    #[error("parameter `{name}` out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("index {index} out of range for alphabet of size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("transformation is not sufficient: {0}")]
    NotSufficient(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("evaluation outside the domain of `{function}` at x={x}")]
    OutsideDomain { function: String, x: f64 },

    #[error("distribution on the simplex boundary requires smoothing: {0}")]
    Boundary(String),

    #[error("quadrature did not converge on [{lo}, {hi}]")]
    Quadrature { lo: f64, hi: f64 },

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = core::result::Result<T, Error>;
