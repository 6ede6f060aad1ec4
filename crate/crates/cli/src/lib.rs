//! Command-line front end for the `singosc` library.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod output;

use std::fmt;

use singosc::{Error, ErrorClass};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;

/// A failure with its process exit code; `message` is a single line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn solver(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_SOLVER,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_line: String = self
            .message
            .split(['\n', '\r'])
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect::<Vec<_>>()
            .join("; ");
        write!(f, "error: {one_line}")
    }
}

impl From<&Error> for CliError {
    fn from(e: &Error) -> Self {
        let code = match e.class() {
            ErrorClass::Config => EXIT_CONFIG,
            ErrorClass::Solver => EXIT_SOLVER,
            ErrorClass::Domain => EXIT_DOMAIN,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::from(&e)
    }
}

/// What a command produced: the document to emit and, for commands that
/// can fail a check after producing output, the failure to report.
#[derive(Debug, Default)]
pub struct Outcome {
    pub text: String,
    pub failure: Option<CliError>,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Outcome {
            text,
            failure: None,
        }
    }
}
