use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Consistency(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io { path: path.display().to_string(), message: err.to_string() }
    }
}

impl From<interlink_core::Error> for CliError {
    fn from(err: interlink_core::Error) -> Self {
        use interlink_core::Error as E;
        match err {
            E::NoConvergence { .. }
            | E::NonNegligibleImaginaryPart(_)
            | E::NegativeProbability { .. }
            | E::NotNormalizedTable(_) => CliError::Consistency(err.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
