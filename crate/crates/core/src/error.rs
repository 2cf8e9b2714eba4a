use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid wiring diagram: {0}")]
    Invalid(String),
    #[error("commutation move rejected at position {pos}: {reason}")]
    Commutation { pos: usize, reason: &'static str },
    #[error("unknown face id {0}")]
    UnknownFace(usize),
    #[error("unknown pseudoline {0}")]
    UnknownPseudoline(usize),
    #[error("not a cutpath: {0}")]
    NotACutpath(String),
    #[error("stale triangle site {0:?}")]
    StaleSite([usize; 3]),
    #[error("cutoff exceeded: {what} supports n <= {max}, got {n}")]
    Cutoff { what: &'static str, max: usize, n: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("malformed certificate: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
