use serde::{Deserialize, Serialize};

use super::certify::SimulationCertificate;
use super::interface::weighted_left_inverse;
use crate::abstraction::GridPartition;
use crate::error::{Error, Result};
use crate::linalg::Vector;

/// The abstract initial state chosen for a concrete initial state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub index: usize,
    /// `P̂x₂₀` before snapping.
    pub unsnapped: Vec<f64>,
    /// `(x₂₀ − Pz)ᵀM(x₂₀ − Pz)` at the snapped point `z`.
    pub residual: f64,
}

/// `x₁₀ = Π(P̂x₂₀)` with `P̂ = (PᵀMP)⁻¹PᵀM`, checked against `ε²`.
pub fn initial_abstract_state(cert: &SimulationCertificate, grid: &GridPartition, x20: &[f64]) -> Result<InitialState> {
    let state = project_initial(cert, grid, x20)?;
    if state.residual > cert.eps * cert.eps {
        return Err(Error::Infeasible(format!(
            "initial states are not related: residual {} exceeds ε² = {}",
            state.residual,
            cert.eps * cert.eps
        )));
    }
    Ok(state)
}

/// As [`initial_abstract_state`] without the feasibility check.
pub fn project_initial(cert: &SimulationCertificate, grid: &GridPartition, x20: &[f64]) -> Result<InitialState> {
    if x20.len() != cert.p.nrows() {
        return Err(Error::dim("initial state has the wrong dimension"));
    }
    let ph = weighted_left_inverse(&cert.p, &cert.m)?;
    let xs = &ph * Vector::from_column_slice(x20);
    let index = grid
        .locate(xs.as_slice())
        .ok_or_else(|| Error::Infeasible("projected initial state lies outside the grid".into()))?;
    let residual = cert.relation_value(&grid.center(index), x20);
    Ok(InitialState { index, unsnapped: xs.as_slice().to_vec(), residual })
}
