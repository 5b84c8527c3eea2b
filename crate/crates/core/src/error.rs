use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("transform matrix is singular")]
    SingularMatrix,
    #[error("transformed curve does not keep X as first coordinate")]
    FirstCoordinate,
    #[error("index {index} outside 1..={k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("insufficient truncation depth: {0}")]
    InsufficientDepth(String),
    /// The truncated enclosure straddles a threshold; a deeper truncation is needed.
    #[error("enclosure too wide to certify comparison at q = {q}")]
    Enclosure { q: BigUint },
    #[error("hypothesis rejected: {0}")]
    Hypothesis(String),
    #[error("infeasible construction step at level {level}: {reason}")]
    Infeasible { level: usize, reason: String },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
