use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precision exceeded: {0}")]
    Precision(String),
    #[error("size cap exceeded: {what} needs {needed}, cap is {cap}")]
    SizeCap { what: String, needed: u128, cap: u128 },
    #[error("no power-section construction for rank {0}")]
    UnsupportedRank(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("missing entry: {0}")]
    MissingEntry(String),
    #[error("tuple does not act transitively on {0} blocks")]
    NotTransitive(usize),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }
}
