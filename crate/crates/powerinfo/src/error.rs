use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Core(#[from] powerinfo_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("golden-table mismatch: {failed} of {total} checks outside tolerance")]
    GoldenMismatch { failed: usize, total: usize },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for validation errors, 2 for computation errors (overflow, caps),
    /// 3 for golden-table mismatches.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(e) if e.is_computational() => 2,
            Error::GoldenMismatch { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
