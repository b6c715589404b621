use thiserror::Error;

/// Errors produced by constructors and operations in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar argument is outside its documented domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A tradeoff function or family failed a structural requirement.
    #[error("invalid tradeoff function: {0}")]
    InvalidTradeoff(String),

    /// A pmf, cdf grid, or sample set failed validation.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// Malformed JSON input; `path` names the offending field.
    #[error("malformed JSON at `{path}`: {message}")]
    Json { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
