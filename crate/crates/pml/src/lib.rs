//! Command-line driver for `pml-core`: parallel replicate runner, layered
//! configuration, CSV tables with `#` metadata and JSON run manifests.

pub mod cli;
pub mod config;
pub mod error;
pub mod manifest;
pub mod output;
pub mod runner;

pub use error::{CliError, CliResult};
