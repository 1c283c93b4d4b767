//! Command-line front end and benchmarks for the spanner and subset TSP
//! crates of this workspace.
//!
//! The `spanner-forge` binary is a thin wrapper around [`commands::run`].

pub mod commands;
pub mod error;
pub mod instance;
pub mod oracles;

pub use commands::{run, Cli, Command, Outcome};
pub use error::{exit, CliError};
pub use instance::{generate, Family, Instance, InstanceSpec};
pub use oracles::{graph_metric, graph_oracle, spanner_factory, Factory, OracleKind};

/// Version tag written into every JSON report.
pub const SCHEMA: u32 = 1;
