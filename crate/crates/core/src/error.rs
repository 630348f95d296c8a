use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {function}: {message}")]
    Domain {
        function: &'static str,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("size limit exceeded: {0}")]
    Size(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("codebook generation failed: {0}")]
    Generation(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            function,
            message: message.into(),
        }
    }
}
