use thiserror::Error;

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CoreError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("symbol is identically zero")]
    ZeroSymbol,
    #[error("symbol has a zero on the unit circle")]
    CircleZero,
    #[error("precision exhausted at {bits} bits: {context}")]
    PrecisionExhausted { bits: u32, context: String },
    #[error("operator is not left semi-Browder: {0}")]
    NotLeftSemiBrowder(String),
    #[error("operator is not right semi-Browder: {0}")]
    NotRightSemiBrowder(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("internal dimension check failed: {0}")]
    DimensionCheckFailed(String),
    #[error("closed-range status could not be determined: {0}")]
    ClosedRangeUnknown(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
