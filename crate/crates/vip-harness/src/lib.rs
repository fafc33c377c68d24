//! Configuration, presets, and run orchestration behind the `vip-bench`
//! CLI. Kept as a library so integration tests can drive runs without
//! spawning processes.

pub mod config;
pub mod init;
pub mod presets;
pub mod runner;

pub use config::{
    AlgorithmConfig, ConfigError, OutputConfig, ProblemConfig, ProblemKind, RunConfig,
    StoppingConfig, WealthConfig,
};
pub use init::seeded_init;
pub use presets::{preset, preset_names};
pub use runner::{compare, run, CompareReport, RunReport};
