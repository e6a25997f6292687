use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid regularity parameters: {0}")]
    InvalidRegularity(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("the optimal value f* is required but unknown")]
    MissingOptimum,

    #[error("objective became non-finite at inner iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{}: line {line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
