use std::path::PathBuf;

use thiserror::Error;

use crate::subset::Subset;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the range an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("basis family is empty")]
    NoBases,

    /// Basis exchange fails for `(b1 \ {x}) ∪ {y}` with every `y ∈ b2 \ b1`.
    #[error("basis exchange fails: B1={b1}, B2={b2}, x={x}")]
    Exchange { b1: Subset, b2: Subset, x: usize },

    #[error(
        "property (**) violated: {x} and {y} share {shared} elements (at most {allowed} allowed)"
    )]
    StarStar {
        x: Subset,
        y: Subset,
        shared: usize,
        allowed: i64,
    },

    #[error("{what}: {value} exceeds the ceiling {limit}")]
    Ceiling {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Verification failures are distinguished from bad input by the CLI.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::Exchange { .. } | Error::NoBases | Error::StarStar { .. }
        )
    }
}
