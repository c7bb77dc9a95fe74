use thiserror::Error;

/// Everything that can go wrong when building or querying objects.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("domain mismatch: {0}")]
    Mismatch(String),

    #[error("not an object or morphism of {cat}: {msg}")]
    Category { cat: String, msg: String },

    #[error("enumeration budget exceeded ({needed} > {budget})")]
    Budget { needed: usize, budget: usize },

    #[error("i/o error on {path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}

pub(crate) fn mismatch<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Mismatch(msg.into()))
}
