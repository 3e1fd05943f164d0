//! Experiment runner around `multispread-core`: network pruning, grid runs,
//! spectral sweeps, group statistics and mindset-stream export.

pub mod commands;
pub mod error;
pub mod experiment;

pub use error::{CliError, Result};
pub use experiment::{ExperimentSpec, Overrides};
