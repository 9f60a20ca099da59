use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("scalars from different fields were combined")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid simplicial set: {0}")]
    InvalidSimplicialSet(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("object is defined to level {available}, level {needed} was requested")]
    InsufficientTruncation { needed: usize, available: usize },
    #[error("simplicial set is not reduced")]
    NotReduced,
    #[error("coalgebra is not connected: {0}")]
    NotConnected(String),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("truncation does not give a finite basis: {0}")]
    UnboundedTruncation(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
