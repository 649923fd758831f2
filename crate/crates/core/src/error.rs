use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("header mismatch: {0}")]
    HeaderMismatch(String),

    #[error("line {line}, column `{column}`: cannot read {value:?} as a {expected}")]
    Parse {
        line: u64,
        column: String,
        value: String,
        expected: &'static str,
    },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("class `{class}` has {count} sample(s); stratified splitting needs at least 2")]
    ClassTooSmall { class: String, count: usize },

    #[error("requested {requested} neighbors but only {available} candidates are available")]
    NotEnoughNeighbors { requested: usize, available: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("config: {0}")]
    Config(String),

    #[error("model file: {0}")]
    Model(String),

    #[error("internal error: {0}")]
    Internal(String),
}

/// Coarse classification used by the command line front end to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParameter(_) | Error::Config(_) => ErrorKind::Usage,
            Error::Io { .. }
            | Error::Csv(_)
            | Error::HeaderMismatch(_)
            | Error::Parse { .. }
            | Error::EmptyDataset
            | Error::SchemaMismatch(_)
            | Error::ClassTooSmall { .. }
            | Error::NotEnoughNeighbors { .. }
            | Error::Degenerate(_)
            | Error::Model(_) => ErrorKind::Data,
            Error::Internal(_) => ErrorKind::Internal,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
