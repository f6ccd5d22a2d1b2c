use serde::Serialize;
use thiserror::Error;
use toricstack::stacky::DataViolation;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Data(DataViolation),
    #[error("{0}")]
    Core(toricstack::Error),
    #[error("{message}")]
    Invalid { code: &'static str, message: String },
}

impl CliError {
    pub fn invalid(code: &'static str, message: impl Into<String>) -> Self {
        CliError::Invalid {
            code,
            message: message.into(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io_error",
            CliError::Parse { .. } => "parse_error",
            CliError::Data(v) => v.code(),
            CliError::Core(e) => e.code(),
            CliError::Invalid { code, .. } => code,
        }
    }

    pub fn to_object(&self) -> ErrorObject {
        let (path, line, column) = match self {
            CliError::Io { path, .. } => (Some(path.clone()), None, None),
            CliError::Parse { path, line, column, .. } => (Some(path.clone()), Some(*line), Some(*column)),
            _ => (None, None, None),
        };
        ErrorObject {
            code: self.code().to_string(),
            message: self.to_string(),
            path,
            line,
            column,
        }
    }
}

impl From<toricstack::Error> for CliError {
    fn from(e: toricstack::Error) -> Self {
        match e {
            toricstack::Error::InvalidData(v) => CliError::Data(v),
            toricstack::Error::InvalidFan(v) => CliError::Data(DataViolation::Fan(v)),
            other => CliError::Core(other),
        }
    }
}

/// Machine-readable error entry of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorObject {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}
