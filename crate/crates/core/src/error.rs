use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the core crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot instantiate template {template_id} with {wep:?}: {reason}")]
    Generation {
        template_id: String,
        wep: String,
        reason: String,
    },

    #[error("{path}:{line}: {message}")]
    Data {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Validation(String),

    #[error("incomplete corpus coverage, missing {} key(s): {}", .0.len(), .0.join(", "))]
    IncompleteCoverage(Vec<String>),

    #[error("empty sample: {0}")]
    EmptySample(&'static str),

    #[error("value {value} at index {index} is outside [0, 100]")]
    OutOfRange { index: usize, value: f64 },

    #[error("degenerate comparison: {0}")]
    Degenerate(&'static str),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
