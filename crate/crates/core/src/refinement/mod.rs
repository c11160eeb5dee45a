//! Refinement of abstract policies into controllers for the concrete model,
//! closed-loop simulation and exact evaluation on finite models.

mod controller;
mod exact;
mod montecarlo;

pub use controller::{ControlStep, RefinedController, RefinementContext, RECONSTRUCTION_RTOL};
pub use exact::{exact_eval_finite, MAX_EXACT_STATES};
pub use montecarlo::{
    monte_carlo, monte_carlo_refined, simulate_run, traces_csv, wilson_interval, Controller, MonteCarloResult, Refined,
    SimulationSpec, TraceRecord, TraceStep, Verdict, Z95,
};
