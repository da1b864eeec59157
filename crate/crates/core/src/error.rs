use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the planning engine.
#[derive(Debug, Error)]
pub enum Error {
    /// Scene geometry violates an invariant (degenerate bounds, bad polygon, ...).
    #[error("invalid scene: {0}")]
    InvalidScene(String),

    /// Site / cell / RIS configuration is unusable.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An argument is outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two rasters that must share a grid do not.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A reduction was requested over a map with no finite values.
    #[error("empty coverage: {0}")]
    EmptyCoverage(String),

    /// Input file could not be parsed; the message names the offending rows
    /// or feature indices.
    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
