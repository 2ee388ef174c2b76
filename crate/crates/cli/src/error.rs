use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },
    #[error("validation error at {context}: {}: {source}", source.kind())]
    Validation { context: String, source: condset::Error },
    #[error("unknown {kind} name {name:?}")]
    UnknownName { kind: &'static str, name: String },
    #[error("usage: {0}")]
    Usage(String),
    #[error("{}: {source}", source.kind())]
    Operation {
        #[from]
        source: condset::Error,
    },
}

impl CliError {
    pub fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Parse {
            context: context.into(),
            message: message.into(),
        }
    }

    pub fn invalid(context: impl Into<String>, source: condset::Error) -> Self {
        CliError::Validation {
            context: context.into(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
