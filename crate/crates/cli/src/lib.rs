//! Configuration, orchestration and file output for the `nimopa` command.

pub mod commands;
pub mod config;
pub mod error;
pub mod estimate;
pub mod output;
pub mod svg;

pub use commands::{execute, run, Command, Format, Options, Report};
pub use config::RunConfig;
pub use error::CliError;
pub use estimate::{estimate_slab, EstimateInput, SlabEstimate};
