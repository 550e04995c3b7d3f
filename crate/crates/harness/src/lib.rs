//! Experiment runner for QAOA decoding: deterministic block generation,
//! per-SNR preamble calibration, decoding under several initialization
//! strategies and classical baselines, noise sweeps, resource tables and CSV
//! output.

pub mod commands;
pub mod config;
pub mod error;
pub mod record;
pub mod resources;
pub mod run;
pub mod seed;
pub mod tables;

pub use config::{
    Baseline, BackendSpec, CodeSpec, Config, ExperimentSpec, Mode, NoiseSweepSpec, ResourceSpec,
    Strategy,
};
pub use error::{HarnessError, Result};
pub use record::{Aggregate, ProblemRow, RunRecord};
pub use run::{generate_snr_blocks, noise_sweep, run_experiment, GeneratedBlock};
pub use tables::{figure_tables, Figure};
