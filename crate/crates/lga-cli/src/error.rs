//! Error type shared by all subcommands, carrying the process exit code.

use std::fmt;
use std::path::{Path, PathBuf};

/// One failure class per exit code. Usage errors (exit 1) are produced by
/// the argument parser before any command runs.
#[derive(Debug)]
pub enum CliError {
    /// File system failure: exit 2.
    Io { path: PathBuf, source: std::io::Error },
    /// Malformed input file: exit 2.
    Parse { path: PathBuf, message: String },
    /// Well-formed input that violates a command precondition: exit 3.
    Constraint(String),
    /// An internal consistency check failed: exit 4.
    Invariant(String),
}

impl CliError {
    pub fn parse(path: &Path, err: impl fmt::Display) -> Self {
        CliError::Parse {
            path: path.to_path_buf(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => 2,
            CliError::Constraint(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Parse { path, message } => write!(f, "{}: {message}", path.display()),
            CliError::Constraint(message) | CliError::Invariant(message) => f.write_str(message),
        }
    }
}

/// Prints the diagnostic to stderr, with an ANSI-red prefix iff
/// `LGA_COLOR=1`.
pub fn report(err: &CliError) {
    let color = std::env::var("LGA_COLOR").is_ok_and(|v| v == "1");
    if color {
        eprintln!("\x1b[31merror:\x1b[0m {err}");
    } else {
        eprintln!("error: {err}");
    }
}
