use std::time::Duration;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("request timed out after {0:?}")]
    Timeout(Duration),
    #[error("endpoint returned HTTP {status}: {body}")]
    Status { status: u16, body: String },
    #[error("connection failed: {0}")]
    Connection(String),
    #[error("malformed response body: {0}")]
    MalformedBody(String),
    #[error("response carries no token log-probabilities")]
    MissingLogprobs,
    #[error("unknown sample id {0:?}")]
    UnknownSample(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("invalid endpoint configuration: {0}")]
    Config(String),
    #[error("environment variable {0} holding the auth token is not set")]
    MissingToken(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error(transparent)]
    Core(#[from] iqakit_core::Error),
}

impl ClientError {
    /// Whether a retry might succeed.
    pub fn is_transient(&self) -> bool {
        match self {
            ClientError::Timeout(_) | ClientError::Connection(_) => true,
            ClientError::Status { status, .. } => *status >= 500 || *status == 429,
            _ => false,
        }
    }
}

pub type Result<T, E = ClientError> = std::result::Result<T, E>;
