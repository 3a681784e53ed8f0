//! Configuration, experiment orchestration and result files for the
//! `scj-core` models.
//!
//! A run is described by a TOML file (see `recipes/`), loaded into an
//! [`ExperimentConfig`], executed by [`run_sweep`], [`run_validate`] or
//! [`run_optimize`], and written as CSV or JSON by [`output`].

pub mod cli;
pub mod config;
pub mod output;
pub mod run;
pub mod units;

pub use config::{load_config, load_config_for, parse_config, parse_config_for, ConfigError, Engine, ExperimentConfig, Mode};
pub use run::{run_optimize, run_sweep, run_validate, OptimizeReport, SweepReport};
