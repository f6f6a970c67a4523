use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the documented domain.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// The requested computation exceeds a memory or work guard.
    #[error("resource guard: {0}")]
    Resource(String),
    /// A value needed during evaluation is missing or invalid.
    #[error("evaluation error: {0}")]
    Evaluation(String),
}

impl Error {
    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    /// Short machine-readable tag for the error class.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Resource(_) => "resource",
            Error::Evaluation(_) => "evaluation",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
