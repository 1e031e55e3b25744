//! The report envelope shared by all subcommands, and exit statuses.

use serde_json::{json, Value};

use crate::parse::ParseError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    /// Bad command line or unparsable input.
    Usage,
    /// Well-formed input that violates an operation's precondition.
    Precondition,
    /// A replay or certification check failed.
    Mismatch,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::Usage => 1,
            ExitStatus::Precondition => 2,
            ExitStatus::Mismatch => 3,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cascades_core::Error),
}

impl CommandError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CommandError::Parse(_) | CommandError::Usage(_) => ExitStatus::Usage,
            CommandError::Core(_) => ExitStatus::Precondition,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CommandError::Parse(_) => "parse",
            CommandError::Usage(_) => "usage",
            CommandError::Core(_) => "precondition",
        }
    }
}

/// What a subcommand produced: a JSON payload, the equivalent text, and
/// whether its checks passed.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub results: Value,
    pub text: String,
    pub status: ExitStatus,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    /// Canonical echo of the input polynomial, if the command takes one.
    pub input: Option<String>,
    pub results: Result<Value, (String, String)>,
    pub timing_ms: f64,
    pub version: String,
}

impl RunReport {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "command": self.command,
            "input": self.input,
            "timing_ms": (self.timing_ms * 1000.0).round() / 1000.0,
            "version": self.version,
        });
        match &self.results {
            Ok(results) => v["results"] = results.clone(),
            Err((kind, message)) => v["error"] = json!({ "kind": kind, "message": message }),
        }
        v
    }
}
