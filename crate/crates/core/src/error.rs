use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    Domain(String),
    #[error("invalid basis: {0}")]
    Basis(String),
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("refused: {reason}")]
    Refused {
        reason: String,
        violations: Vec<String>,
    },
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
