//! Batch front-end for `photostat`: JSON job configs in, CSV or JSON out.
//!
//! Exit status: 0 success, 1 I/O failure, 2 configuration error,
//! 3 numerical-health failure. Errors go to standard error as one JSON object.

pub mod config;
pub mod jobs;
pub mod output;

pub use config::{parse_config, validate_config, ConfigIssue, Format, JobConfig};
pub use jobs::{run, Artifact, Cell};
pub use output::{render, Rendered};

use serde_json::json;

/// Version of this crate, recorded next to the library version.
pub const CLI_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "PHOTOSTAT_WORKERS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration ({} issue(s))", .0.len())]
    Config(Vec<ConfigIssue>),
    #[error(transparent)]
    Compute(#[from] photostat::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Compute(e) if e.is_numerical_health() => 3,
            CliError::Compute(_) => 2,
        }
    }

    /// Structured form written to standard error.
    pub fn to_json(&self) -> serde_json::Value {
        let (kind, issues) = match self {
            CliError::Io(_) => ("io", vec![]),
            CliError::Config(issues) => ("config", issues.clone()),
            CliError::Compute(e) if e.is_numerical_health() => ("numerical_health", vec![]),
            CliError::Compute(_) => ("invalid_input", vec![]),
        };
        let mut err = json!({ "kind": kind, "exit_code": self.exit_code(), "message": self.to_string() });
        if !issues.is_empty() {
            err["issues"] = json!(issues);
        }
        if let CliError::Compute(e) = self {
            err["variant"] = json!(format!("{e:?}").split([' ', '(', '{']).next().unwrap_or_default());
        }
        json!({ "error": err })
    }
}
