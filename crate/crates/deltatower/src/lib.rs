//! Command-line front end for `deltatower-core`: JSON artifacts, run
//! reports and the subcommand implementations.

pub mod commands;
pub mod error;
pub mod formats;
pub mod random;
pub mod report;

pub use error::CliError;
pub use report::{CheckRecord, RunReport};
