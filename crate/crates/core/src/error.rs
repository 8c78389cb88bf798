use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is out of range or inconsistent.
    #[error("invalid configuration: `{field}` {message}")]
    Config { field: String, message: String },

    #[error("genome slot {slot} out of range: {message}")]
    InvalidGenome { slot: usize, message: String },

    #[error("flat baseline is zero: the sun never rises during the scenario hours")]
    ZeroBaseline,

    #[error("{0}")]
    InsufficientData(String),

    #[error("t statistic undefined: both samples have zero variance")]
    UndefinedVariance,

    #[error("unknown algorithm `{0}` (expected ga, es-comma, es-plus or ep)")]
    UnknownAlgorithm(String),

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
