use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the library. Per-line problems in input files are not
/// errors; they are skipped and counted in the relevant load report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("i/o error: {0}")]
    Stream(#[from] std::io::Error),

    #[error("invalid pattern `{text}`: {reason}")]
    PatternSyntax { text: String, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot build a pattern graph from patterns of mixed orientation")]
    MixedOrientation,

    #[error("explicit coverage is undefined for n = {0} (need n >= 2)")]
    CoverageDomain(u32),

    #[error("malformed record: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
