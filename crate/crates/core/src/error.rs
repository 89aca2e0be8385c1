//! Error taxonomy shared by every module.
//!
//! Two failure classes matter operationally: contract violations (caller
//! handed us something malformed) and numeric failures (a solver broke down
//! on well-formed input). The CLI maps them to exit codes 2 and 3.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SboedError {
    /// Precondition or invariant violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A numerical method failed (non-finite values, solver breakdown, divergence).
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Artifact on disk does not match what the manifest promised.
    #[error("stale artifact: {0}")]
    StaleArtifact(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed artifact {path}: {detail}")]
    Format { path: String, detail: String },
}

pub type Result<T> = std::result::Result<T, SboedError>;

impl SboedError {
    pub fn contract(msg: impl Into<String>) -> Self {
        SboedError::Contract(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        SboedError::Numeric(msg.into())
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        SboedError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            SboedError::Contract(_) => 2,
            SboedError::Numeric(_) => 3,
            _ => 2,
        }
    }
}
