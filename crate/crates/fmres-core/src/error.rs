use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
///
/// Variants are grouped by what the caller can do about them: `Parse`,
/// `Invalid` and `Dimension` mean the input has to change, `Numerical`
/// means the computation broke down, `Io` wraps filesystem failures with
/// the offending path attached.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("numerical failure in {stage}{}: {message}", iteration.map(|i| format!(" (iteration {i})")).unwrap_or_default())]
    Numerical {
        stage: String,
        iteration: Option<usize>,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    pub fn numerical(stage: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Numerical {
            stage: stage.into(),
            iteration: None,
            message: msg.into(),
        }
    }

    pub fn numerical_at(
        stage: impl Into<String>,
        iteration: Option<usize>,
        msg: impl Into<String>,
    ) -> Self {
        Error::Numerical {
            stage: stage.into(),
            iteration,
            message: msg.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
