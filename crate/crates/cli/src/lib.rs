//! Batch front end for the `driftwalk` solver: run configurations, the
//! validation suites and raw exit-law sampling.

pub mod commands;
pub mod config;

pub use commands::{cmd_sample_exit, cmd_solve, cmd_validate, solve, SampleExitParams, Status};
pub use config::RunConfig;
