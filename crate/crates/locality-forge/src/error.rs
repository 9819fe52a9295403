use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {msg}{}", witness.as_ref().map(|w| format!(" (witness: {w})")).unwrap_or_default())]
    Domain { msg: String, witness: Option<String> },
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("internal consistency fault: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain { msg: msg.into(), witness: None }
    }

    pub fn domain_with(msg: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Domain { msg: msg.into(), witness: Some(witness.into()) }
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Returns an internal fault when a theorem-backed assertion does not hold.
macro_rules! ensure_internal {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err($crate::error::Error::Internal(format!($($arg)*)));
        }
    };
}
pub(crate) use ensure_internal;
