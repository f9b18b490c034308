//! Command-line front end: the ideal file format, the subcommands and the
//! direct vs modular benchmark harness.

pub mod bench;
pub mod commands;
pub mod format;

pub use commands::{run_command, Outcome};
