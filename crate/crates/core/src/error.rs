use thiserror::Error;

/// Errors raised by the `stoplat` library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sample space mismatch: expected {expected} outcomes, got {found}")]
    SpaceMismatch { expected: usize, found: usize },

    #[error("invalid sample space: {0}")]
    InvalidSpace(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("undefined arithmetic: {0}")]
    UndefinedArithmetic(String),

    #[error("invalid scalar {0}: scaling requires a positive factor")]
    InvalidScalar(String),

    #[error("invalid truncation level {0}: must be a positive integer")]
    InvalidTruncation(i64),

    #[error("cone order is only defined for finite-valued times (outcome {outcome} is infinite)")]
    ConeOnInfinite { outcome: usize },

    #[error("negative value {value} at outcome {outcome} where a nonnegative one is required")]
    Negative { outcome: usize, value: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Instance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
