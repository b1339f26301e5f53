use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error(
        "infeasible bounds: {selected} selected assets cannot satisfy l = {lower}, u = {upper}"
    )]
    InfeasibleBounds {
        selected: usize,
        lower: f64,
        upper: f64,
    },

    #[error("invalid configuration `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("format error at row {row}: {message}")]
    Format { row: usize, message: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("complexity guard: {0}")]
    ComplexityGuard(String),
}

impl Error {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Config {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
