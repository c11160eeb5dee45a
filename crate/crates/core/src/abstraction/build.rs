use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gaussian::interval_mass;
use super::grid::GridPartition;
use super::reduction::ReducedModel;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};
use crate::mdp::{FiniteMdp, DROP_THRESHOLD};

/// Relative tolerance on off-diagonal noise covariance entries.
const DIAGONAL_TOL: f64 = 1e-12;

/// Finite abstraction: grid cells plus an absorbing sink (the last state).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteAbstraction {
    pub grid: GridPartition,
    pub inputs: Vec<Vec<f64>>,
    #[serde(with = "linalg::rows")]
    pub c1: Mat,
    pub mdp: FiniteMdp,
}

impl FiniteAbstraction {
    pub fn num_cells(&self) -> usize {
        self.grid.num_cells()
    }

    pub fn sink(&self) -> usize {
        self.grid.num_cells()
    }

    pub fn representative(&self, i: usize) -> Vec<f64> {
        self.grid.center(i)
    }

    /// `h₁(z_i) = C₁ z_i`.
    pub fn output_of(&self, i: usize) -> Vec<f64> {
        (&self.c1 * Vector::from_vec(self.grid.center(i))).as_slice().to_vec()
    }

    /// Output-space radius of a cell: `‖C₁‖₂ ‖δ⃗‖₂ / 2`.
    pub fn output_margin(&self) -> f64 {
        let w: f64 = self.grid.widths().iter().map(|x| x * x).sum::<f64>().sqrt();
        linalg::spectral_norm(&self.c1) * w * 0.5
    }
}

/// Uniform input grid over the ball `‖u‖² ≤ c_u` with `per_axis` points per
/// axis in lexicographic order; `[0]` when `c_u = 0`.
pub fn input_grid(m: usize, c_u: f64, per_axis: usize) -> Vec<Vec<f64>> {
    if c_u <= 0.0 || per_axis <= 1 {
        return vec![vec![0.0; m]];
    }
    let r = c_u.sqrt();
    let axis: Vec<f64> = (0..per_axis).map(|k| -r + 2.0 * r * k as f64 / (per_axis - 1) as f64).collect();
    let total = per_axis.pow(m as u32);
    (0..total)
        .map(|mut t| {
            let mut u = vec![0.0; m];
            for d in (0..m).rev() {
                u[d] = axis[t % per_axis];
                t /= per_axis;
            }
            u
        })
        .filter(|u| u.iter().map(|x| x * x).sum::<f64>() <= c_u * (1.0 + 1e-12))
        .collect()
}

/// Gaussian transition masses of every grid cell under
/// `x₁⁺ = A₁z_i + B₁u_j + B_{w1}w`; mass leaving the box goes to the sink.
pub fn build_abstraction(red: &ReducedModel, grid: &GridPartition, inputs: &[Vec<f64>]) -> Result<FiniteAbstraction> {
    let ns = red.order();
    if grid.dim() != ns {
        return Err(Error::dim(format!("grid has dimension {}, reduced model {ns}", grid.dim())));
    }
    if inputs.is_empty() {
        return Err(Error::arg("at least one abstract input is required"));
    }
    if inputs.iter().any(|u| u.len() != red.b1.ncols()) {
        return Err(Error::dim("abstract input has the wrong dimension"));
    }
    let cov = &red.bw1 * red.bw1.transpose();
    let scale = (0..ns).map(|d| cov[(d, d)]).fold(0.0, f64::max);
    for r in 0..ns {
        for c in 0..ns {
            if r != c && cov[(r, c)].abs() > DIAGONAL_TOL * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::arg("abstract noise covariance is not diagonal"));
            }
        }
    }
    let sigmas: Vec<f64> = (0..ns).map(|d| cov[(d, d)].max(0.0).sqrt()).collect();
    let cells = grid.num_cells();
    let sink = cells as u32;
    let us: Vec<Vector> = inputs.iter().map(|u| Vector::from_vec(u.clone())).collect();

    let mut rows: Vec<Vec<Vec<(u32, f64)>>> = (0..cells)
        .into_par_iter()
        .map(|i| {
            let z = Vector::from_vec(grid.center(i));
            let drift = &red.a1 * &z;
            us.iter()
                .map(|u| {
                    let mean = &drift + &red.b1 * u;
                    let axes: Vec<Vec<(usize, f64)>> = (0..ns)
                        .map(|d| {
                            (0..grid.counts[d])
                                .filter_map(|k| {
                                    let (lo, hi) = grid.axis_interval(d, k);
                                    let p = interval_mass(mean[d], sigmas[d], lo, hi);
                                    (p > 0.0).then_some((k, p))
                                })
                                .collect()
                        })
                        .collect();
                    gaussian_row(grid, &axes, sink)
                })
                .collect()
        })
        .collect();
    rows.push(vec![vec![(sink, 1.0)]; us.len()]);
    let mdp = FiniteMdp::new(cells + 1, us.len(), rows.into_iter().flatten().collect())?;
    Ok(FiniteAbstraction { grid: grid.clone(), inputs: inputs.to_vec(), c1: red.c1.clone(), mdp })
}

/// Product of per-axis masses; entries below the drop threshold and the
/// out-of-box remainder go to the sink.
fn gaussian_row(grid: &GridPartition, axes: &[Vec<(usize, f64)>], sink: u32) -> Vec<(u32, f64)> {
    let mut row = Vec::new();
    let mut kept = 0.0;
    if axes.iter().all(|a| !a.is_empty()) {
        let mut pos = vec![0usize; axes.len()];
        let mut idx = vec![0usize; axes.len()];
        'outer: loop {
            let mut p = 1.0;
            for (d, a) in axes.iter().enumerate() {
                idx[d] = a[pos[d]].0;
                p *= a[pos[d]].1;
            }
            if p >= DROP_THRESHOLD {
                row.push((grid.flat_index(&idx) as u32, p));
                kept += p;
            }
            for d in (0..axes.len()).rev() {
                pos[d] += 1;
                if pos[d] < axes[d].len() {
                    continue 'outer;
                }
                pos[d] = 0;
            }
            break;
        }
    }
    let rest = 1.0 - kept;
    if rest >= DROP_THRESHOLD {
        row.push((sink, rest));
    }
    row
}
