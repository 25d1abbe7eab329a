use thiserror::Error;

/// Errors shared across the crate. The CLI maps these onto exit codes, so
/// the variants distinguish "your input is broken" from "you asked for more
/// than the configured caps allow".
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("degenerate subset: {0}")]
    DegenerateSubset(String),

    #[error("hypergraph is not linear: {0}")]
    NotLinear(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn malformed(msg: impl Into<String>) -> Self {
        Error::MalformedInput(msg.into())
    }
}
