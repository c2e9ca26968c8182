//! Command-line harness for `ergopress`: scenario files in, deterministic
//! CSV / JSON reports out.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 invalid input,
//! 3 domain error (empty fiber, inadmissible period, failed generation).

pub mod args;
pub mod commands;
pub mod error;
pub mod generate;
pub mod report;
pub mod scenario;
pub mod suite;

pub use args::Cli;
pub use commands::{run, Outcome};
pub use error::{CliError, CliResult};

/// Environment variable capping the worker pool size.
pub const THREADS_VAR: &str = "ERGOPRESS_THREADS";
