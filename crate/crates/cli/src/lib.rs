//! Library side of the `sectorflow` command: scenario parsing and the
//! commands that turn a scenario into CSV artifacts.

pub mod commands;
pub mod config;
pub mod error;

pub use commands::*;
pub use config::{read_column, InitialSpec, ProfileSpec, ScenarioConfig, KEYS};
pub use error::{CliError, Result};
