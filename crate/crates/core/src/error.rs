use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller passed arguments outside an operation's domain.
    #[error("usage: {0}")]
    Usage(String),

    #[error("relative error undefined: reference entries are all zero")]
    ZeroReference,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported matrix format: {0}")]
    UnsupportedFormat(String),

    /// Shipped or user-supplied data failed an integrity check.
    #[error("integrity: {0}")]
    Integrity(String),

    #[error("unclassified mnemonic {mnemonic}; nearest groups: {nearest}")]
    Unclassified { mnemonic: String, nearest: String },

    #[error("unsupported pattern {pattern:?}: {msg}")]
    UnsupportedPattern { pattern: String, msg: String },

    /// Download failed; retrying may succeed.
    #[error("network error fetching {matrix}: {msg}")]
    Network { matrix: String, msg: String },

    #[error("offline and not cached: {}", .0.join(", "))]
    NotCached(Vec<String>),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
