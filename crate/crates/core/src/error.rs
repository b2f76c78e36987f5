use thiserror::Error;

use crate::report::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    /// Tables of the wrong shape, indices out of range, non-permutations.
    #[error("structural error: {0}")]
    Structural(String),
    /// An operation that needs `neg` got an algebra without it, or two
    /// objects with different signatures were compared.
    #[error("signature error: {0}")]
    Signature(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("size cap exceeded: {count} elements (cap {cap})")]
    SizeCap { count: usize, cap: usize },
    /// A search ran out of time or nodes. `checkpoint` is JSON that lets
    /// the search resume where it stopped.
    #[error("budget exhausted: {message}")]
    Budget {
        message: String,
        checkpoint: Option<String>,
    },
    /// A check that must pass by construction has failed.
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error("law failure: {0}")]
    Law(ValidationReport),
    #[error("parse error in {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
