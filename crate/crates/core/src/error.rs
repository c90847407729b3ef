use thiserror::Error;

/// Errors produced by the permvec library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A base vector whose permutation orbit collapses below the full
    /// orbit size; the caller is expected to regenerate.
    #[error("degenerate base vector: {0}")]
    DegenerateBase(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A malformed file; `context` names the offending field or line.
    #[error("format error in {context}: {message}")]
    Format { context: String, message: String },

    /// Numeric accuracy is undefined when the reference vector is all zero.
    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn format(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            context: context.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
