use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("chart mismatch: operands live on different charts")]
    ChartMismatch,
    #[error("variable index {index} out of range for chart of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("Jacobi structure not verified: {0}")]
    StructureNotVerified(String),
    #[error("not a 1-cocycle: {0}")]
    NotCocycle(String),
    #[error("function is not admissible: {0}")]
    Inadmissible(String),
    #[error("rank violation at sample point ({point}): expected rank {expected}, found {found}")]
    RankViolation {
        point: String,
        expected: usize,
        found: usize,
    },
    #[error("refused: {0}")]
    Refused(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
