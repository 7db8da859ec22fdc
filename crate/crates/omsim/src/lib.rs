//! Scenario configuration, sweep engine, figure presets, and the
//! validation suite behind the `omsim` command-line tool.
//!
//! The numerical pipeline itself lives in `omsim-core`; this crate adds
//! everything that touches the outside world: JSON scenario configs, CSV
//! emission, preset bundles reproducing the reference figures, and the
//! machine-readable validation report.

pub mod config;
pub mod presets;
pub mod sweep;
pub mod verification;

pub use config::{AxisKind, ConfigError, ScenarioConfig, SweepSpec};
pub use sweep::{run_sweep, write_csv, CsvOptions, RowStatus, SweepRow};
pub use verification::{run_validation, Level, ValidationReport};
