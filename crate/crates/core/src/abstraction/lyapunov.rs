use crate::error::{Error, Result};
use crate::linalg::{frobenius, spectral_radius, Mat};

/// Relative residual accepted by [`solve_discrete_lyapunov`].
pub const LYAPUNOV_RTOL: f64 = 1e-10;
const MAX_DOUBLINGS: usize = 200;

/// Solve `A X Aᵀ − X + S = 0` by squared Smith doubling.
pub fn solve_discrete_lyapunov(a: &Mat, s: &Mat) -> Result<Mat> {
    let n = a.nrows();
    if a.ncols() != n || s.shape() != (n, n) {
        return Err(Error::dim("Lyapunov equation needs square A and S of equal size"));
    }
    let rho = spectral_radius(a);
    if !(rho < 1.0) {
        return Err(Error::Unstable(rho));
    }
    let s = (s + s.transpose()) * 0.5;
    let s_norm = frobenius(&s);
    if s_norm == 0.0 {
        return Ok(Mat::zeros(n, n));
    }
    let mut x = s.clone();
    let mut ak = a.clone();
    let mut converged = false;
    for _ in 0..MAX_DOUBLINGS {
        let inc = &ak * &x * ak.transpose();
        let inc_norm = frobenius(&inc);
        x += inc;
        ak = &ak * &ak;
        if inc_norm <= f64::EPSILON * frobenius(&x) || frobenius(&ak) == 0.0 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(format!("Lyapunov doubling did not converge in {MAX_DOUBLINGS} steps")));
    }
    let x = (&x + x.transpose()) * 0.5;
    let res = lyapunov_residual(a, &x, &s);
    if res > LYAPUNOV_RTOL * s_norm {
        return Err(Error::NoConvergence(format!("Lyapunov residual {res:e} exceeds tolerance")));
    }
    Ok(x)
}

/// `‖A X Aᵀ − X + S‖_F`.
pub fn lyapunov_residual(a: &Mat, x: &Mat, s: &Mat) -> f64 {
    frobenius(&(a * x * a.transpose() - x + s))
}
