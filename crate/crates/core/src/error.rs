use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid transition rates: {0}")]
    InvalidRates(String),

    #[error("node {node} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("node {0} has no neighbors")]
    IsolatedNode(usize),

    #[error("game state {state} out of range for {state_count} states")]
    StateOutOfRange { state: usize, state_count: usize },

    #[error("tail of {tail} samples exceeds the {available} recorded")]
    TailTooLarge { tail: usize, available: usize },

    #[error("burn-in of {burn_in} samples leaves nothing of the {available} recorded")]
    BurnInTooLarge { burn_in: usize, available: usize },

    #[error("relative error undefined for a zero theoretical value")]
    ZeroTheory,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid config key `{key}`: {message}")]
    Validation { key: String, message: String },

    #[error("sweep point {coords} failed: {source}")]
    SweepPoint {
        coords: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn validation(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
