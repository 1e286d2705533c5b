//! Scenario configuration, experiment orchestration and result files for
//! the CW Doppler radar simulator in `vitals-core`.

pub mod config;
mod error;
pub mod format;
pub mod io;
pub mod physio;
pub mod scenario;
pub mod seed;

pub use config::ScenarioConfig;
pub use error::{HarnessError, Result};
pub use physio::{accuracy_report, generate_physio, run_session, AccuracyRow, SubjectParams};
pub use scenario::{run_cell, run_scenario, run_sweep, Metrics, ScenarioRun, SweepResult};
