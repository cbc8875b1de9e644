use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by walk construction, evolution, and analysis.
#[derive(Debug, Error)]
pub enum WalkError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The walker's support reached the edge of the allocated lattice.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("config error at `{field}` (line {line}, column {column}): {message}")]
    Config {
        field: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl WalkError {
    /// True for errors caused by bad user input rather than a failed run.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            WalkError::InvalidParameter(_) | WalkError::Config { .. } | WalkError::Undefined(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, WalkError>;
