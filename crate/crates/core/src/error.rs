use thiserror::Error;

/// Errors produced by every fallible operation in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WsatError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded { what: String, size: u128, cap: u128 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, WsatError>;

impl WsatError {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        WsatError::InvalidArgument(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        WsatError::Precondition(msg.into())
    }

    pub(crate) fn cap(what: impl Into<String>, size: u128, cap: u128) -> Self {
        WsatError::CapExceeded {
            what: what.into(),
            size,
            cap,
        }
    }
}
