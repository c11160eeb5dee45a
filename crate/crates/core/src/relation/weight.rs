use crate::abstraction::solve_discrete_lyapunov;
use crate::error::{Error, Result};
use crate::linalg::{spectral_radius, Mat};

/// Regularization of [`default_weight`].
pub const DEFAULT_ETA: f64 = 1e-6;

/// `M` solving `(Ā/ρ)ᵀM(Ā/ρ) − M + C₂ᵀC₂ + ηI = 0`; then `C₂ᵀC₂ ⪯ M` and
/// `‖M^{1/2}ĀM^{−1/2}‖₂ < ρ`.
pub fn scaled_weight(a_bar: &Mat, c2: &Mat, rho: f64, eta: f64) -> Result<Mat> {
    let n = a_bar.nrows();
    if c2.ncols() != n {
        return Err(Error::dim("C₂ and Ā have different state dimensions"));
    }
    if !(rho > 0.0) || !(eta >= 0.0) {
        return Err(Error::arg("weight parameters must satisfy ρ > 0, η ≥ 0"));
    }
    let s = c2.transpose() * c2 + Mat::identity(n, n) * eta;
    solve_discrete_lyapunov(&(a_bar.transpose() / rho), &s)
}

/// `M` solving `ĀᵀMĀ − M + C₂ᵀC₂ + ηI = 0` with `η = 1e−6`.
pub fn default_weight(a_bar: &Mat, c2: &Mat) -> Result<Mat> {
    scaled_weight(a_bar, c2, 1.0, DEFAULT_ETA)
}

/// Candidate `(ρ, η)` pairs for a weight search, the default one first.
pub fn weight_candidates(a_bar: &Mat) -> Vec<(f64, f64)> {
    let rho0 = spectral_radius(a_bar);
    let mut out = vec![(1.0, DEFAULT_ETA)];
    let etas = [1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0];
    for s in 1..100 {
        let rho = rho0 + (1.0 - rho0) * s as f64 / 100.0;
        for &eta in &etas {
            out.push((rho, eta));
        }
    }
    out
}
