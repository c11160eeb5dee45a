use serde::{Deserialize, Serialize};

use super::lyapunov::solve_discrete_lyapunov;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::model::LinearGaussianModel;

/// Reduced model `x₁⁺ = A₁x₁ + B₁u₁ + B_{w1}w`, `y = C₁x₁`, together with the
/// projection `P` from reduced to full coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedModel {
    #[serde(with = "linalg::rows")]
    pub a1: Mat,
    #[serde(with = "linalg::rows")]
    pub b1: Mat,
    #[serde(with = "linalg::rows")]
    pub bw1: Mat,
    #[serde(with = "linalg::rows")]
    pub c1: Mat,
    #[serde(with = "linalg::rows")]
    pub p: Mat,
    /// Hankel singular values of the full closed loop, descending.
    pub hankel: Vec<f64>,
}

impl ReducedModel {
    pub fn order(&self) -> usize {
        self.a1.nrows()
    }

    /// Rescale reduced coordinates so every nonzero column of `C₁` has unit
    /// norm and a positive largest-magnitude entry.
    pub fn normalize_output_scale(&mut self) {
        for j in 0..self.order() {
            let col = self.c1.column(j);
            let norm = col.norm();
            if norm == 0.0 {
                continue;
            }
            let lead = col.iter().copied().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
            let s = norm * lead.signum();
            // x' = s x on coordinate j
            self.c1.column_mut(j).scale_mut(1.0 / s);
            self.p.column_mut(j).scale_mut(1.0 / s);
            self.a1.column_mut(j).scale_mut(1.0 / s);
            self.a1.row_mut(j).scale_mut(s);
            self.b1.row_mut(j).scale_mut(s);
            self.bw1.row_mut(j).scale_mut(s);
        }
    }
}

/// Square-root balanced truncation of the closed loop `A₂ + B₂K` with input
/// matrix `[B₂ B_{w2}]` and output `C₂`.
pub fn balanced_truncation(model: &LinearGaussianModel, k: &Mat, order: usize) -> Result<ReducedModel> {
    let n = model.state_dim();
    if order == 0 || order > n {
        return Err(Error::arg(format!("reduced order must be in 1..={n}")));
    }
    let acl = model.closed_loop(k)?;
    let mut bb = Mat::zeros(n, model.input_dim() + model.noise_dim());
    bb.view_mut((0, 0), (n, model.input_dim())).copy_from(&model.b);
    bb.view_mut((0, model.input_dim()), (n, model.noise_dim())).copy_from(&model.bw);
    let wc = solve_discrete_lyapunov(&acl, &(&bb * bb.transpose()))?;
    let wo = solve_discrete_lyapunov(&acl.transpose(), &(model.c.transpose() * &model.c))?;
    let lc = linalg::sym_sqrt(&wc)?;
    let lo = linalg::sym_sqrt(&wo)?;
    let svd = (&lo * &lc).svd(true, true);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let hankel: Vec<f64> = idx.iter().map(|&i| svd.singular_values[i]).collect();
    if !(hankel[order - 1] > 1e-12 * hankel[0]) {
        return Err(Error::Singular("Gramian factor is numerically singular at the requested order".into()));
    }
    let u = svd.u.unwrap();
    let vt = svd.v_t.unwrap();
    let mut t = Mat::zeros(n, order);
    let mut tinv = Mat::zeros(order, n);
    for (c, &i) in idx.iter().take(order).enumerate() {
        let s = hankel[c].sqrt();
        t.set_column(c, &(&lc * vt.row(i).transpose() / s));
        tinv.set_row(c, &(u.column(i).transpose() * &lo / s));
    }
    Ok(ReducedModel {
        a1: &tinv * &acl * &t,
        b1: &tinv * &model.b,
        bw1: &tinv * &model.bw,
        c1: &model.c * &t,
        p: t,
        hankel,
    })
}
