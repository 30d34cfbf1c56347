use thiserror::Error;

/// Errors raised by the library. Every variant names the module that
/// detected the problem so callers can report it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{module}: invalid parameter: {message}")]
    InvalidParameter {
        module: &'static str,
        message: String,
    },

    #[error("{module}: domain exceeded: {message}")]
    DomainExceeded {
        module: &'static str,
        /// The offending quantity (a momentum, or an eigenvalue of P).
        value: f64,
        /// The limit it was compared against.
        limit: f64,
        message: String,
    },

    #[error("{module}: degenerate input: {message}")]
    Degenerate {
        module: &'static str,
        message: String,
    },
}

impl Error {
    pub(crate) fn invalid(module: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            module,
            message: message.into(),
        }
    }

    /// True when the error signals that the compact range of the momentum
    /// map has been left.
    pub fn is_domain_exceeded(&self) -> bool {
        matches!(self, Error::DomainExceeded { .. })
    }

    pub fn module(&self) -> &'static str {
        match self {
            Error::InvalidParameter { module, .. }
            | Error::DomainExceeded { module, .. }
            | Error::Degenerate { module, .. } => module,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
