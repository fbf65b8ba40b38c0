//! Config-driven experiments for `igd-core`: single runs, parameter sweeps,
//! config validation and SVG output.
//!
//! A run is described by one TOML document (see [`config::ExperimentConfig`])
//! and writes `trajectory.csv`, `profile.toml`, `spider.svg` and
//! `metrics.svg` into its output directory. Sweeps run the Cartesian
//! product of their grids, one subdirectory per point, and add
//! `summary.csv`, `failures.csv` and `gap_overlay.svg`.

// `!(v > 0.0)` is deliberate: NaN must fail range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
mod error;
pub mod runner;
pub mod svg;
pub mod validate;

pub use config::{ExperimentConfig, GameFile, ResolvedConfig};
pub use error::{HarnessError, Result};
pub use runner::{run_single, run_sweep, RunRecord, SweepOutcome};
pub use validate::{validate_config, Diagnostic, Severity};
