use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty domain: {0}")]
    EmptyDomain(String),

    #[error("base primes only reach {have}, need at least {required}")]
    BaseTooSmall { have: u64, required: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric range error: {0}")]
    NumericRange(String),

    #[error("quadrature did not converge: {0}")]
    Accuracy(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: PathBuf, reason: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed report: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericRange(_) | Error::Accuracy(_) => 3,
            Error::Io { .. } => 4,
            _ => 2,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
