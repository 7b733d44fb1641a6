//! Library half of the `phasegeo` command: file formats, sweeps and the
//! subcommand bodies. `main.rs` only parses arguments and writes output.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 relation violation or
//! failed check.

pub mod commands;
pub mod input;
pub mod sweep;

use phasegeo::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

pub const TOLERANCE_SCALE_VAR: &str = "PHASEGEO_TOLERANCE_SCALE";

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Input(String),
    Violation(String),
}

impl CliError {
    /// Relation violations keep their own exit code; everything else the core
    /// rejects is bad input.
    pub fn from_core(e: Error) -> Self {
        match e {
            Error::RelationViolated { .. } => CliError::Violation(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => EXIT_USAGE,
            CliError::Violation(_) => EXIT_VIOLATION,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Violation(m) => write!(f, "relation violation: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Text to print and the exit code to return.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

/// Reads the verification tolerance multiplier from the environment.
pub fn tolerance_scale() -> Result<f64, CliError> {
    match std::env::var(TOLERANCE_SCALE_VAR) {
        Err(_) => Ok(1.0),
        Ok(s) => parse_tolerance_scale(&s),
    }
}

pub fn parse_tolerance_scale(s: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite() && *x > 0.0)
        .ok_or_else(|| CliError::Usage(format!("{TOLERANCE_SCALE_VAR} must be a positive number, got {s:?}")))
}
