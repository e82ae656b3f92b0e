use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by document parsing, analysis, and signal operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("document contains no segments")]
    EmptyDocument,

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("operation needs at least 2 segments, got {0}")]
    TooFewSegments(usize),

    #[error("filter window {window} is too large for a signal of {len} gaps (max {max})")]
    FilterWindow {
        window: usize,
        len: usize,
        max: usize,
    },

    #[error("zero-norm input: normalized correlation is undefined")]
    ZeroNorm,

    #[error("signal length mismatch: {a_label} has {a_len} gaps, {b_label} has {b_len}")]
    SignalLength {
        a_label: String,
        a_len: usize,
        b_label: String,
        b_len: usize,
    },

    #[error("boundary sets span signals of different lengths: {0} vs {1}")]
    ComparisonLength(usize, usize),
}

impl Error {
    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }
}
