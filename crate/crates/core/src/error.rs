use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} needs horizon >= {needed}, got {got}")]
    InsufficientHorizon {
        what: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("lower index {j} exceeds upper index {n}")]
    ReversedRange { j: u64, n: u64 },
    #[error("abscissa {x} outside [0, {horizon}]")]
    OutOfDomain { x: f64, horizon: usize },
    #[error("contact structure mismatch: {0}")]
    StructuralInconsistency(String),
    #[error("lambda is too close to the spectrum (condition estimate {condition:e})")]
    SpectrumProximity { condition: f64 },
    #[error("numerical rank is indeterminate: singular value {singular_value:e} within a decade of the cut {cut:e}")]
    IndeterminateRank { singular_value: f64, cut: f64 },
    #[error("sequence is not admissible at index {index}: {reason}")]
    NotAdmissible { index: usize, reason: &'static str },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
