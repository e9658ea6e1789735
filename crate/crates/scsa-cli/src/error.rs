//! Exit-code contract: 0 success, 1 usage/config, 2 I/O, 3 malformed data,
//! 4 numerical failure.

use std::fmt;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Error carrying the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DATA,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.message.fmt(f)
    }
}

impl std::error::Error for CliError {}

impl From<scsa_core::Error> for CliError {
    fn from(e: scsa_core::Error) -> Self {
        use scsa_core::Error::*;
        let code = match &e {
            // Structural problems with the data being processed.
            InvalidSignal(_) | InvalidInput(_) | InvalidGrid(_) => EXIT_DATA,
            NumericalFailure(_) => EXIT_NUMERIC,
            // Parameter and configuration problems.
            InvalidParams(_) | DegenerateInput(_) | PeakNotFound(_) | InfiniteSnr => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
