//! Everything around the `starkit-core` algorithms that touches the
//! outside world: graph file formats, JSON documents, the thread-parallel
//! oracle driver, the reproduction report, and the CLI plumbing.

pub mod formats;
pub mod parallel;
pub mod report;
pub mod seed;

use std::fmt;
use std::io;

/// Top-level error for CLI-facing operations; carries the exit-code
/// contract (0 success, 1 invalid verdict, 2 domain error, 3 I/O error).
#[derive(Debug)]
pub enum CliError {
    /// Bad input: parameters or file contents outside the supported domain.
    Domain(String),
    Io(io::Error),
    Core(starkit_core::Error),
}

impl CliError {
    pub fn domain(msg: impl Into<String>) -> CliError {
        CliError::Domain(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 2,
            CliError::Io(_) => 3,
            CliError::Core(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(msg) => write!(f, "{msg}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<starkit_core::Error> for CliError {
    fn from(e: starkit_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
