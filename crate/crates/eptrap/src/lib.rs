//! Command-line front end for `eptrap-core`: JSON configs, CSV/JSON/SVG
//! output, scenario bundles and the self-test suite.

use std::path::Path;

pub mod bundle;
pub mod commands;
pub mod config;
pub mod output;
pub mod parallel;
pub mod report;
pub mod selftest;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] eptrap_core::Error),
    #[error("{0}")]
    Assertion(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    /// 1 for configuration and IO problems, 2 for numerical failures,
    /// 3 for failed assertions.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Core(e) if e.is_config() => 1,
            CliError::Core(_) => 2,
            CliError::Assertion(_) => 3,
        }
    }

    pub fn reason(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
            CliError::Core(e) => e.reason(),
            CliError::Assertion(_) => "assertion-failed",
        }
    }

    /// `error: <reason>: <message>` on one line.
    pub fn line(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ");
        format!("error: {}: {msg}", self.reason())
    }
}
