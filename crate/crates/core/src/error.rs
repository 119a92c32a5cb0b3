use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("qubit count mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("circuit is not canonical: {0}")]
    NotCanonical(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("invalid coordinate (wire {wire}, time {time})")]
    InvalidCoordinate { wire: usize, time: u32 },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("underdetermined input state: {0}")]
    Underdetermined(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph search exhausted after {tried} attempts (seed {seed})")]
    GraphSearchExhausted { seed: u64, tried: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("verification failed at stage `{stage}`: {msg}")]
    Verification { stage: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
