//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("missing file: {0}")]
    MissingFile(PathBuf),

    #[error("hash mismatch: {0}")]
    HashMismatch(String),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("candidate pool too small: need at least {required}, have {available}")]
    InsufficientPool { required: usize, available: usize },

    #[error("non-finite loss at step {step}; batch dump written to {dump}")]
    NonFiniteLoss { step: u64, dump: PathBuf },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MissingFile(_) => 3,
            Error::HashMismatch(_) => 4,
            Error::InvalidConfig(_) | Error::Parse(_) => 5,
            Error::InsufficientPool { .. } => 6,
            Error::NonFiniteLoss { .. } => 7,
            _ => 1,
        }
    }
}
