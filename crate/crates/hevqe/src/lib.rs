//! Experiment pipelines, configuration, file formats and the command-line
//! driver built on [`hevqe_core`].

pub mod commands;
pub mod config;
pub mod error;
pub mod experiments;
pub mod io;
pub mod seeds;

pub use config::RunConfig;
pub use error::ConfigError;
pub use hevqe_core as core;
