//! Library side of the `railyard` command: configuration, subcommands and
//! the verification suite.

pub mod commands;
pub mod config;
pub mod criteria;
pub mod output;
pub mod quad;

use std::fmt;

/// Failure of a subcommand, mapped to the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable, malformed or invalid configuration (exit 2).
    Config(String),
    /// Some verification criterion failed (exit 1).
    Verify(String),
    /// Numerical or I/O failure while running a task (exit 1).
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Verify(_) | CliError::Run(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(s) => write!(f, "config error: {s}"),
            CliError::Verify(s) => write!(f, "verification failed: {s}"),
            CliError::Run(s) => write!(f, "{s}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<railyard_core::Error> for CliError {
    fn from(e: railyard_core::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Run(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Run(e.to_string())
    }
}
