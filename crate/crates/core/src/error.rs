use thiserror::Error;

/// Errors raised by the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("[{module}] invalid input: {message}")]
    InvalidInput {
        module: &'static str,
        message: String,
    },
    #[error("[exactpoly] sample point is a pole of the rational function")]
    PoleAtSample,
    #[error("[{module}] invalid spec: {message}")]
    InvalidSpec {
        module: &'static str,
        message: String,
    },
    #[error("[oracle] inconclusive: {0}")]
    OracleInconclusive(String),
}

impl Error {
    pub(crate) fn input(module: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidInput {
            module,
            message: message.into(),
        }
    }

    pub(crate) fn spec(module: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidSpec {
            module,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
