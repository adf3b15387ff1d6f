//! Config-driven runs over `rsp-core`: synthesis, fidelity pipelines,
//! parameter sweeps, correlator tables and propagation probes.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;

pub use commands::{run, Command, RunOutput};
pub use config::Config;
pub use error::CliError;
