//! Configuration, sweeps and output behind the `spinvdw` binary.

pub mod check;
pub mod config;
pub mod output;
pub mod sweep;

pub use config::{parse_config, parse_config_str, preset, OmegaBRule, OutputFormat, SweepSpec};
pub use output::{emit, read_csv, read_json};
pub use sweep::{run_sweep, run_sweep_with_threads, SweepResult, SweepRow};
