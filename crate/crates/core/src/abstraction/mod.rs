//! Order reduction and finite grid abstraction of linear-Gaussian models.

mod build;
mod gaussian;
mod grid;
mod lyapunov;
mod reduction;

pub use build::{build_abstraction, input_grid, FiniteAbstraction};
pub use gaussian::{cell_probability, erf, erfc, interval_mass, normal_cdf, normal_sf, TAIL_SIGMAS};
pub use grid::{build_grid, GridPartition};
pub use lyapunov::{lyapunov_residual, solve_discrete_lyapunov, LYAPUNOV_RTOL};
pub use reduction::{balanced_truncation, ReducedModel};
