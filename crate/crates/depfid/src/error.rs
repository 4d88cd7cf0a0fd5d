use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = DepfidError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum DepfidError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// 1-based record and column of a cell that is not a finite decimal number.
    #[error("row {row}, column {col}: not a finite decimal number")]
    Parse { row: usize, col: usize },
    /// 1-based record whose field count differs from the first record.
    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRows { row: usize, expected: usize, found: usize },
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Core(#[from] depfid_core::Error),
}

impl DepfidError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        DepfidError::Io { path: path.into(), source }
    }
}
