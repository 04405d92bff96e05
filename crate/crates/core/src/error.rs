use std::path::PathBuf;

use thiserror::Error;

/// Errors produced across waveform synthesis, scoring, search and the batch front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a permutation of 0..{n}: {detail}")]
    NotAPermutation { n: usize, detail: String },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("sample rate mismatch: {0} vs {1}")]
    SampleRateMismatch(f64, f64),

    #[error("exhaustive search too large: {evaluations} evaluations exceeds the limit of {limit}")]
    SearchTooLarge { evaluations: u128, limit: u128 },

    #[error("malformed sequence file {path}, line {line}: {detail}")]
    SequenceFile {
        path: PathBuf,
        line: usize,
        detail: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
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
