use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certify::{certify, CertInputs, SimulationCertificate};
use super::interface::{align_reduced, fit_inputs};
use super::weight::{scaled_weight, weight_candidates, DEFAULT_ETA};
use crate::abstraction::ReducedModel;
use crate::error::Result;
use crate::linalg::Mat;
use crate::model::LinearGaussianModel;

/// How the weight matrix `M` is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    /// `ĀᵀMĀ − M + C₂ᵀC₂ + 10⁻⁶I = 0`.
    Default,
    /// Search over `(Ā/ρ)ᵀM(Ā/ρ) − M + C₂ᵀC₂ + ηI = 0` for the smallest certified ε.
    #[default]
    Tuned,
}

/// A reduced model made consistent with the interface, plus its certificate.
#[derive(Clone, Debug)]
pub struct RelationDesign {
    pub reduced: ReducedModel,
    pub cert: SimulationCertificate,
    pub rho: f64,
    pub eta: f64,
}

/// Align the projection of a balanced truncation, choose `M`, refit the
/// abstract input matrices and certify.
pub fn design_relation(
    model: &LinearGaussianModel,
    truncated: &ReducedModel,
    k: &Mat,
    widths: &[f64],
    delta: f64,
    mode: WeightMode,
) -> Result<RelationDesign> {
    let (aligned, q) = align_reduced(model, truncated, k)?;
    let a_bar = model.closed_loop(k)?;
    let r = Mat::identity(model.input_dim(), model.input_dim());
    let evaluate = |rho: f64, eta: f64| -> Result<RelationDesign> {
        let m = scaled_weight(&a_bar, &model.c, rho, eta)?;
        let reduced = fit_inputs(model, &aligned, &r, &m)?;
        let inp = CertInputs { model, reduced: &reduced, q: q.clone(), r: r.clone(), k: k.clone(), m, widths: widths.to_vec() };
        let cert = certify(&inp, delta)?;
        Ok(RelationDesign { reduced, cert, rho, eta })
    };
    let default = evaluate(1.0, DEFAULT_ETA);
    if mode == WeightMode::Default {
        return default;
    }
    let best = weight_candidates(&a_bar)
        .into_par_iter()
        .enumerate()
        .filter_map(|(i, (rho, eta))| evaluate(rho, eta).ok().map(|d| (i, d)))
        .reduce_with(|a, b| if (b.1.cert.eps, b.0) < (a.1.cert.eps, a.0) { b } else { a });
    match best {
        Some((_, b)) => Ok(b),
        None => default,
    }
}
