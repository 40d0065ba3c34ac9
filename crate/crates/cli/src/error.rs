//! Error taxonomy mapped onto process exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input text (exit 2).
    #[error("parse error: {0}")]
    Parse(String),
    /// Well-formed input violating an invariant (exit 2).
    #[error("validation error: {0}")]
    Validation(String),
    /// A solver failed during a run (exit 3; the manifest is still written).
    #[error("solver failure: {0}")]
    Solver(String),
    /// Filesystem trouble (exit 4).
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Validation(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
