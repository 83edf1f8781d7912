//! Command-line front end: reads JSON problem descriptions, runs the
//! homogenization, geometry and energy pipelines and writes JSON reports.

pub mod cli;
pub mod commands;
pub mod error;
pub mod report;
pub mod schema;

pub use cli::{run, Cli, Command};
pub use error::{CliError, CliResult};
