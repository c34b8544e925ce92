use thiserror::Error;

use crate::degree::TriDegree;

#[derive(Debug, Error)]
pub enum Error {
    #[error("negative Adams filtration in degree ({s}, {f}, {w})")]
    NegativeFiltration { s: i64, f: i64, w: i64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("catalog inconsistent with {table}: {msg}")]
    Consistency { table: String, msg: String },

    #[error("unknown generator family `{0}`")]
    UnknownFamily(String),

    #[error("linearly dependent subspace generators (rank {rank} < {len})")]
    DependentSubspace { rank: usize, len: usize },

    #[error("vector length {got} does not match dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0} out of window")]
    OutOfWindow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ambiguous underlying detector for {class}: {candidates:?}")]
    AmbiguousDetector {
        class: String,
        candidates: Vec<String>,
    },

    #[error("unsupported format `{0}`")]
    UnsupportedFormat(String),

    #[error("structural constraint violations:\n{0}")]
    Violations(String),

    #[error("differential on {class} at {degree} is not a cycle representative on page {page}")]
    NotACycle {
        class: String,
        degree: TriDegree,
        page: u32,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
