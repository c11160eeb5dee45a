//! Approximate probabilistic simulation relations between a reduced grid
//! abstraction and the concrete linear-Gaussian model.

mod certify;
mod chi2;
mod design;
mod falsify;
mod gain;
mod initial;
mod interface;
mod weight;

pub use certify::{certify, certify_sweep, CertInputs, SimulationCertificate, TradeoffPoint, WEIGHT_TOL};
pub use chi2::{chi2_bound, chi2_cdf, CHI2_TOL};
pub use design::{design_relation, RelationDesign, WeightMode};
pub use falsify::{falsify, Counterexample};
pub use gain::default_gain;
pub use initial::{initial_abstract_state, project_initial, InitialState};
pub use interface::{
    align_projection, align_reduced, fit_inputs, interface_residual, solve_interface, weighted_left_inverse,
    InterfaceSolution, INTERFACE_RTOL,
};
pub use weight::{default_weight, scaled_weight, weight_candidates, DEFAULT_ETA};
