//! Experiment runner behind the `antagonistic` binary.
//!
//! Every output is a pure function of the command, its configuration and the
//! master seed; parallel work is merged in a fixed order, so results do not
//! depend on `--threads`.

pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod suites;

pub use commands::{run, Cli};
pub use error::{CliError, Outcome};
