//! Error type shared across the crate.
//!
//! Every error maps onto one of three process exit codes so that batch
//! scripts can distinguish bad inputs from I/O trouble from internal
//! numeric failures.

use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A data row that does not conform to the file schema.
    #[error("{path}:{line}: {msg}")]
    MalformedRow {
        path: String,
        line: usize,
        msg: String,
    },

    /// A domain invariant violated by otherwise well-formed input.
    #[error("pair {pair}: field `{field}`: {msg}")]
    Invariant {
        pair: String,
        field: &'static str,
        msg: String,
    },

    /// Invalid scene description.
    #[error("invalid scene: {0}")]
    Scene(String),

    /// Invalid argument or descriptor string.
    #[error("invalid argument: {0}")]
    Arg(String),

    /// Matrix dimension or pair-id mismatch between operands.
    #[error("mismatch: {0}")]
    Mismatch(String),

    /// Internal numeric failure (non-Hermitian input, no convergence, ...).
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Filesystem-level failure, annotated with the offending path.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    /// JSON (de)serialization failure, annotated with the offending path.
    #[error("{}: {msg}", path.display())]
    Json { path: PathBuf, msg: String },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn json(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        Error::Json {
            path: path.into(),
            msg: err.to_string(),
        }
    }

    /// Process exit code: 2 validation, 3 I/O, 4 internal numeric failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::MalformedRow { .. }
            | Error::Invariant { .. }
            | Error::Scene(_)
            | Error::Arg(_)
            | Error::Mismatch(_) => 2,
            Error::Io { .. } | Error::Json { .. } => 3,
            Error::Numeric(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
