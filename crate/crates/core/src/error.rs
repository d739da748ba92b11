use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the domain of the requested operation.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A spectrum or generator file could not be parsed.
    #[error("{}:{line}: {message}", path.display())]
    Load {
        path: PathBuf,
        line: u64,
        message: String,
    },

    /// Generator rows are linearly dependent over GF(2).
    #[error("generator matrix is rank deficient: rank {rank} < {rows} rows")]
    Rank { rank: usize, rows: usize },

    /// An exhaustive computation would exceed its configured budget.
    #[error("enumeration budget exceeded: {required} required, budget is {budget}")]
    Budget { required: String, budget: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
