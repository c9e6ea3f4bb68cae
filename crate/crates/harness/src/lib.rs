//! Experiment harness: binds the three-cavity operating point, runs the four
//! initial-state cases under the full and effective models across cavity
//! lifetime sweeps, and emits CSV tables and SVG charts of fidelity versus
//! photon lifetime.

pub mod csvio;
pub mod error;
pub mod operating_point;
pub mod plot;
pub mod run;
pub mod scenario;

pub use error::HarnessError;
pub use run::{run_scenario, run_scenario_detailed, sweep_kappa, ResultRow, RunDetail};
pub use scenario::{Model, Reference, Scenario, ScenarioConfig};
