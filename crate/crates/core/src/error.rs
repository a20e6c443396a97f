use thiserror::Error;

/// Errors produced by the pipeline, optimizer, data generation and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("insufficient data: series has {len} samples, need more than {required}")]
    InsufficientData { len: usize, required: usize },

    #[error("degenerate track: unbiased track is identically zero")]
    DegenerateTrack,

    #[error("degenerate normalization: series has zero range")]
    DegenerateNormalization,

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Broad error family, used by the command-line front end to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Runtime,
}

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParameter { .. } | Error::Config(_) | Error::Json(_) => ErrorKind::Config,
            Error::InvalidInput(_)
            | Error::InsufficientData { .. }
            | Error::DegenerateNormalization
            | Error::Csv(_) => ErrorKind::Data,
            Error::DegenerateTrack | Error::Io(_) => ErrorKind::Runtime,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
