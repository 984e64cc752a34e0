use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("representation error: {0}")]
    Representation(String),
    #[error("vanishing prefix probability {probability:e} at step {step}")]
    VanishingPrefix { step: usize, probability: f64 },
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
