use std::path::Path;

use serde::{Deserialize, Serialize};

use super::chi2::chi2_bound;
use super::interface::{interface_residual, INTERFACE_RTOL};
use crate::abstraction::ReducedModel;
use crate::error::{Error, Result};
use crate::linalg::{self, frobenius, min_sym_eigenvalue, spectral_norm, sym_inv_sqrt, sym_sqrt, Mat};
use crate::model::LinearGaussianModel;

/// Tolerance on `C₂ᵀC₂ ⪯ M`.
pub const WEIGHT_TOL: f64 = 1e-10;

/// Everything `certify` needs besides δ.
#[derive(Clone, Debug)]
pub struct CertInputs<'a> {
    pub model: &'a LinearGaussianModel,
    pub reduced: &'a ReducedModel,
    pub q: Mat,
    pub r: Mat,
    pub k: Mat,
    pub m: Mat,
    /// Grid diameter `δ⃗`.
    pub widths: Vec<f64>,
}

/// Witness of an (ε,δ) simulation relation `(x₂−Px₁)ᵀM(x₂−Px₁) ≤ ε²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationCertificate {
    /// The ε used downstream; equals `certified_eps` unless pinned.
    pub eps: f64,
    /// Smallest ε proved by the norm bound.
    pub certified_eps: f64,
    pub delta: f64,
    #[serde(with = "linalg::rows")]
    pub p: Mat,
    #[serde(with = "linalg::rows")]
    pub q: Mat,
    #[serde(with = "linalg::rows")]
    pub r: Mat,
    #[serde(with = "linalg::rows")]
    pub k: Mat,
    #[serde(with = "linalg::rows")]
    pub m: Mat,
    pub c_w: f64,
    pub c_u: f64,
    pub widths: Vec<f64>,
    #[serde(with = "linalg::rows")]
    pub a_bar: Mat,
    #[serde(with = "linalg::rows")]
    pub b_bar: Mat,
    #[serde(with = "linalg::rows")]
    pub bw_bar: Mat,
    pub lambda: f64,
    pub gamma_u: f64,
    pub gamma_w: f64,
    pub gamma_beta: f64,
    pub interface_residual: f64,
}

impl SimulationCertificate {
    /// True when `eps` is at least the certified value.
    pub fn is_sound(&self) -> bool {
        self.eps >= self.certified_eps
    }

    /// Copy with `eps` overridden; the certified value is kept for reporting.
    pub fn with_eps(&self, eps: f64) -> SimulationCertificate {
        SimulationCertificate { eps, ..self.clone() }
    }

    /// `(x₂ − Px₁)ᵀM(x₂ − Px₁)`.
    pub fn relation_value(&self, x1: &[f64], x2: &[f64]) -> f64 {
        let e = linalg::Vector::from_column_slice(x2) - &self.p * linalg::Vector::from_column_slice(x1);
        (e.transpose() * &self.m * &e)[(0, 0)]
    }

    pub fn in_relation(&self, x1: &[f64], x2: &[f64]) -> bool {
        self.relation_value(x1, x2) <= self.eps * self.eps
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, serde_json::to_string_pretty(self)?)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// Smallest ε with `λε + γ_u + γ_w + γ_β ≤ ε`, where `λ = ‖M^{1/2}ĀM^{−1/2}‖₂`,
/// `γ_u = ‖M^{1/2}B̄‖₂√c_u`, `γ_w = ‖M^{1/2}B̄_w‖₂√c_w`, `γ_β = ‖M^{1/2}P‖₂‖δ⃗‖₂`.
pub fn certify(inp: &CertInputs, delta: f64) -> Result<SimulationCertificate> {
    let model = inp.model;
    let red = inp.reduced;
    let (n, ns) = red.p.shape();
    let mdim = model.input_dim();
    if n != model.state_dim() || inp.q.shape() != (mdim, ns) || inp.r.shape() != (mdim, red.b1.ncols()) {
        return Err(Error::dim("certificate inputs have inconsistent shapes"));
    }
    if inp.k.shape() != (mdim, n) || inp.m.shape() != (n, n) || inp.widths.len() != ns {
        return Err(Error::dim("gain, weight or grid diameter has the wrong shape"));
    }
    let res = interface_residual(&red.a1, &model.a, &model.b, &red.p, &inp.q);
    if res > INTERFACE_RTOL {
        return Err(Error::Infeasible(format!("interface residual {res:e} exceeds {INTERFACE_RTOL:e}")));
    }
    let c2p = &model.c * &red.p;
    let cscale = frobenius(&red.c1).max(frobenius(&c2p));
    if frobenius(&(&red.c1 - &c2p)) > 1e-8 * cscale.max(f64::MIN_POSITIVE) {
        return Err(Error::Infeasible("C₁ differs from C₂P".into()));
    }
    let gap = min_sym_eigenvalue(&(&inp.m - model.c.transpose() * &model.c));
    if gap < -WEIGHT_TOL {
        return Err(Error::Infeasible(format!("C₂ᵀC₂ ⪯ M fails (min eigenvalue {gap:e})")));
    }
    let c_w = chi2_bound(model.noise_dim(), delta)?;
    let c_u = model.input_bound;
    let ms = sym_sqrt(&inp.m)?;
    let msi = sym_inv_sqrt(&inp.m)?;
    let a_bar = model.closed_loop(&inp.k)?;
    let b_bar = &model.b * &inp.r - &red.p * &red.b1;
    let bw_bar = &model.bw - &red.p * &red.bw1;
    let lambda = spectral_norm(&(&ms * &a_bar * &msi));
    let gamma_u = spectral_norm(&(&ms * &b_bar)) * c_u.sqrt();
    let gamma_w = spectral_norm(&(&ms * &bw_bar)) * c_w.sqrt();
    let dnorm = inp.widths.iter().map(|x| x * x).sum::<f64>().sqrt();
    let gamma_beta = spectral_norm(&(&ms * &red.p)) * dnorm;
    if !(lambda < 1.0) {
        return Err(Error::Infeasible(format!("error dynamics are not contractive in the M-norm (λ = {lambda})")));
    }
    let eps = (gamma_u + gamma_w + gamma_beta) / (1.0 - lambda);
    Ok(SimulationCertificate {
        eps,
        certified_eps: eps,
        delta,
        p: red.p.clone(),
        q: inp.q.clone(),
        r: inp.r.clone(),
        k: inp.k.clone(),
        m: inp.m.clone(),
        c_w,
        c_u,
        widths: inp.widths.clone(),
        a_bar,
        b_bar,
        bw_bar,
        lambda,
        gamma_u,
        gamma_w,
        gamma_beta,
        interface_residual: res,
    })
}

/// One point of the ε/δ trade-off curve; `eps` is `None` when infeasible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    pub delta: f64,
    pub eps: Option<f64>,
}

pub fn certify_sweep(inp: &CertInputs, deltas: &[f64]) -> Vec<TradeoffPoint> {
    deltas.iter().map(|&delta| TradeoffPoint { delta, eps: certify(inp, delta).ok().map(|c| c.eps) }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vector;

    fn scalar_model(bw2: f64) -> LinearGaussianModel {
        LinearGaussianModel::new(
            Mat::from_element(1, 1, 0.5),
            Mat::from_element(1, 1, 1.0),
            Mat::from_element(1, 1, bw2),
            Mat::from_element(1, 1, 1.0),
            0.0,
            Vector::zeros(1),
        )
        .unwrap()
    }

    fn scalar_reduced(bw1: f64) -> ReducedModel {
        ReducedModel {
            a1: Mat::from_element(1, 1, 0.5),
            b1: Mat::from_element(1, 1, 1.0),
            bw1: Mat::from_element(1, 1, bw1),
            c1: Mat::from_element(1, 1, 1.0),
            p: Mat::from_element(1, 1, 1.0),
            hankel: vec![],
        }
    }

    fn inputs<'a>(m: &'a LinearGaussianModel, r: &'a ReducedModel, widths: f64) -> CertInputs<'a> {
        CertInputs {
            model: m,
            reduced: r,
            q: Mat::zeros(1, 1),
            r: Mat::identity(1, 1),
            k: Mat::zeros(1, 1),
            m: Mat::identity(1, 1),
            widths: vec![widths],
        }
    }

    #[test]
    fn scalar_closed_form() {
        let m = scalar_model(0.1);
        let r = scalar_reduced(0.0);
        let c = certify(&inputs(&m, &r, 0.0), 0.05).unwrap();
        let expect = 0.1 * c.c_w.sqrt() / 0.5;
        assert!((c.eps - expect).abs() < 1e-12);
        assert!((c.eps - 0.391_99).abs() < 1e-4);
    }

    #[test]
    fn exact_relation_gives_zero() {
        let m = scalar_model(0.1);
        let r = scalar_reduced(0.1);
        let mut inp = inputs(&m, &r, 0.0);
        inp.k = Mat::from_element(1, 1, -0.5);
        inp.q = Mat::from_element(1, 1, 0.0);
        let c = certify(&inp, 0.1).unwrap();
        assert_eq!(c.eps, 0.0);
        assert_eq!(c.lambda, 0.0);
    }

    #[test]
    fn non_contractive_is_infeasible() {
        let m = scalar_model(0.1);
        let r = scalar_reduced(0.0);
        let mut inp = inputs(&m, &r, 0.0);
        inp.k = Mat::from_element(1, 1, 0.6);
        assert!(matches!(certify(&inp, 0.05), Err(Error::Infeasible(_))));
    }
}
