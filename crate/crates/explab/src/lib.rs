//! Seeded Monte Carlo experiments over the permutation-scanning library:
//! universality and containment estimation, thread-scan success rates,
//! shift-length surveys, decomposition sweeps, and the coupled-sample
//! containment audit. Identical configurations produce byte-identical
//! output files.

pub mod config;
pub mod output;
pub mod runners;

pub use config::{ExperimentConfig, Kind, LengthPreset, OutputFormat, SCHEMA};
pub use output::ExperimentResult;
pub use runners::{run, ExplabError};
