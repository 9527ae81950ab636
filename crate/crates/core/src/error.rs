use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("constraint row {row} out of range (m = {m})")]
    RowOutOfRange { row: usize, m: usize },
    #[error("coordinate {coord} out of range (n = {n})")]
    CoordOutOfRange { coord: usize, n: usize },
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("bregman divergence undefined: {0}")]
    DomainError(String),
    #[error("set is unbounded; supply the radius bound explicitly")]
    UnboundedSet,
    #[error("prox setup is incompatible with the feasible set: {0}")]
    IncompatibleProx(String),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("iteration budget needs a radius bound that is not available")]
    MissingRadiusBound,
    #[error("no productive iterations were taken")]
    NoProductiveSteps,
    #[error("dual function has no closed form for this problem: {0}")]
    UnsupportedProblemClass(String),
    #[error("sampler weights are all zero")]
    AllZeroWeights,
    #[error("a reference optimum is required for this command")]
    MissingReferenceOptimum,
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: PathBuf::new(),
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn with_path(self, p: &std::path::Path) -> Self {
        match self {
            Error::Parse {
                line,
                column,
                message,
                ..
            } => Error::Parse {
                path: p.to_path_buf(),
                line,
                column,
                message,
            },
            other => other,
        }
    }
}
