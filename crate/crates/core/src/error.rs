use alloc::string::String;
use core::fmt;

/// Library error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input outside an operation's documented domain.
    Domain(String),
    /// A structural guarantee failed while building an object; indicates a
    /// construction bug rather than bad input.
    Structure(String),
    /// A configured search budget ran out before the search finished.
    Resource(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Structure(msg) => write!(f, "structure error: {msg}"),
            Error::Resource(msg) => write!(f, "resource error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
