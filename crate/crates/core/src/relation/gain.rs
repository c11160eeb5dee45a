use crate::error::{Error, Result};
use crate::linalg::{spectral_radius, Mat};
use crate::model::LinearGaussianModel;

/// Stabilizing gain `K` (for `u = Kx`) from the discrete Riccati equation
/// with state weight `I` and input weight `I`, solved by fixed-point iteration.
pub fn default_gain(model: &LinearGaussianModel) -> Result<Mat> {
    let (a, b) = (&model.a, &model.b);
    let n = model.state_dim();
    let m = model.input_dim();
    let q = Mat::identity(n, n);
    let r = Mat::identity(m, m);
    let mut x = q.clone();
    for _ in 0..100_000 {
        let btx = b.transpose() * &x;
        let g = (&r + &btx * b).try_inverse().ok_or_else(|| Error::Singular("R + BᵀXB".into()))?;
        let next = a.transpose() * &x * a - a.transpose() * x.transpose() * b * &g * &btx * a + &q;
        let next = (&next + next.transpose()) * 0.5;
        let diff = (&next - &x).norm();
        x = next;
        if diff <= 1e-13 * x.norm() {
            let k = -(&r + b.transpose() * &x * b).try_inverse().unwrap() * b.transpose() * &x * a;
            let rho = spectral_radius(&(a + b * &k));
            if rho >= 1.0 {
                return Err(Error::Unstable(rho));
            }
            return Ok(k);
        }
        if !diff.is_finite() {
            break;
        }
    }
    Err(Error::NoConvergence("Riccati iteration".into()))
}
