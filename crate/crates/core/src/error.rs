use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid tower schedule: {0}")]
    InvalidSchedule(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("explicit limit exceeded: {what} needs {needed}, limit is {limit}")]
    ExplicitLimitExceeded {
        what: String,
        needed: BigUint,
        limit: u64,
    },

    #[error("horizon exhausted: requested {requested} steps, anchor allows at most {max}")]
    HorizonExhausted { requested: BigUint, max: BigUint },

    #[error("no divergence within horizon {horizon} at level {level}; anchor deeper")]
    NoDivergenceWithinHorizon { level: usize, horizon: BigUint },

    #[error("graph mismatch: {0}")]
    GraphMismatch(String),

    #[error("invalid walk: {0}")]
    InvalidWalk(String),

    #[error("invalid anchor: {0}")]
    InvalidAnchor(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("operation undefined at the base vertex of level {0}")]
    BaseVertex(usize),
}

impl Error {
    pub(crate) fn limit(what: impl Into<String>, needed: impl Into<BigUint>, limit: u64) -> Self {
        Error::ExplicitLimitExceeded {
            what: what.into(),
            needed: needed.into(),
            limit,
        }
    }
}
