//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A value or index handed to an operation is outside its contract.
    #[error("invalid input: {0}")]
    Input(String),

    /// A parameter set fails its construction-time constraints.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A metric is undefined for the given data (e.g. constant truths).
    #[error("metric undefined: {0}")]
    Metric(String),

    /// A dataset generator cannot satisfy its request.
    #[error("dataset generation failed: {0}")]
    Generation(String),

    /// A persisted model or dataset file is malformed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
