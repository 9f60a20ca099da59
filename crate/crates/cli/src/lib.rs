//! Batch front end: fixture documents, command dispatch and reports.

pub mod commands;
pub mod fixture;
pub mod report;

pub use commands::{render, run, run_args, Cli, Command};
pub use report::{Record, Report};
