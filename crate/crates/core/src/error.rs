use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by parsers, analyses and models.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("undefined measure: {0}")]
    Undefined(String),

    #[error("missing inputs: {}", .0.join("; "))]
    Missing(Vec<String>),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable category of the error.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } | Error::Csv(_) | Error::Json(_) => "parse",
            Error::Schema(_) => "schema",
            Error::Contract(_) => "contract",
            Error::Undefined(_) => "undefined",
            Error::Missing(_) => "missing",
            Error::Io { .. } => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
