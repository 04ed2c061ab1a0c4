use std::fmt;
use std::path::Path;

use wepbench_gateway::GatewayError;

/// Failure of a command, carrying its exit code class.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration. Exit code 1.
    Usage(String),
    /// Unreadable, invalid or incomplete input data. Exit code 2.
    Data(String),
    /// The backend could not answer every prompt. Exit code 3.
    Backend(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Backend(_) => 3,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Data(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Backend(m) => write!(f, "backend failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<wepbench_core::Error> for CliError {
    fn from(e: wepbench_core::Error) -> Self {
        match e {
            wepbench_core::Error::InvalidConfig(_) => CliError::Usage(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<GatewayError> for CliError {
    fn from(e: GatewayError) -> Self {
        match e {
            GatewayError::Config(_) | GatewayError::MissingApiKey(_) => CliError::Usage(e.to_string()),
            GatewayError::Core(inner) => inner.into(),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(e.to_string())
    }
}
