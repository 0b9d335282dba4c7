use thiserror::Error;

use crate::witness::Reason;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet size must be at least 1 and at most 256, got {0}")]
    InvalidAlphabet(usize),

    #[error("letter {letter} is outside an alphabet of size {size}")]
    InvalidLetter { letter: usize, size: usize },

    #[error("invalid index sequence: {0}")]
    InvalidIndex(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{what}: work budget of {budget} exceeded")]
    BudgetExceeded { what: &'static str, budget: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown bound name `{0}`")]
    UnknownBound(String),

    #[error("witness rejected: {0}")]
    InvalidWitness(Reason),

    #[error("trial {trial} failed: {source}")]
    Trial { trial: usize, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;
