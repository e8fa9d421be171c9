use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("instance too large for exhaustive search: {0}")]
    SizeLimit(String),

    #[error("certificate invalid for polytope {id}: {reason}")]
    CertificateInvalid { id: u64, reason: String },

    #[error("invariant violated for class {id}: {reason}")]
    Invariant { id: u64, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
