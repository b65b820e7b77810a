use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("write failed: {0}")]
    Output(#[from] io::Error),
    #[error("{context}: {message}")]
    Parse { context: String, message: String },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error("{0}")]
    ProtocolFailure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Output(_) | CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::InvalidState(_) => 3,
            CliError::ProtocolFailure(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<bellforge_core::Error> for CliError {
    fn from(e: bellforge_core::Error) -> Self {
        CliError::InvalidState(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::Output(io),
            other => CliError::Output(io::Error::other(format!("{other:?}"))),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
