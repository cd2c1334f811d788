//! Experiment harness around `nclock`: field files, test scenarios and
//! parameter sweeps with CSV output.

pub mod io;
pub mod scenario;
pub mod sweep;

pub use io::{load_field, save_field, FieldFormat, FieldHeader, IoError};
pub use scenario::{Overrides, Realization, Scenario, ThetaRule};
pub use sweep::{run_sweep, write_csv, SweepConfig, SweepError, SweepRecord, Timing};
