use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// A config value that failed validation, named by its dotted key.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read config {}: {source}", .path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("config is missing required fields: {}", .0.join(", "))]
    Missing(Vec<String>),

    #[error("invalid config:\n{}", format_fields(.0))]
    Invalid(Vec<FieldError>),

    #[error(transparent)]
    Numerics(#[from] tempus::Error),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn format_fields(errs: &[FieldError]) -> String {
    errs.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n")
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 for config problems, 3 for coverage and window-mass failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Parse(_) | CliError::Missing(_) | CliError::Invalid(_) => 2,
            CliError::Numerics(tempus::Error::GridCoverage { .. } | tempus::Error::WindowMass { .. }) => 3,
            // Bad arguments and undersampled windows come straight from config values.
            CliError::Numerics(tempus::Error::InvalidArgument(_) | tempus::Error::Nyquist { .. }) => 2,
            CliError::Numerics(_) | CliError::Io { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
