use thiserror::Error;

/// Failures surfaced by the library. Search routines report the absence of a
/// witness with `None`, never with an error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("value not representable: {0}")]
    NotRepresentable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
