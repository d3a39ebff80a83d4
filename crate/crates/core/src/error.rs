use thiserror::Error;

use crate::lattice::LatticeCell;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex has no boundary")]
    VertexHasNoBoundary,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate overflow: {0}")]
    Overflow(String),

    #[error("duplicate cell {0}")]
    DuplicateCell(LatticeCell),

    #[error("illegal move: {0}")]
    IllegalMove(String),

    #[error("malformed move: {0}")]
    MalformedMove(String),

    #[error("invalid slice at t = {level}: {detail}")]
    InvalidSlice { level: f64, detail: String },

    #[error("sweep stuck at solid {index}: {diagnostic}")]
    Stuck { index: usize, diagnostic: String },

    #[error("structure error: {0}")]
    Structure(String),

    #[error("level {level} outside range [{min}, {max}]")]
    LevelOutOfRange { level: i64, min: i64, max: i64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
