use statrs::function::gamma::gamma_lr;

use crate::error::{Error, Result};

/// Absolute bisection tolerance on `c_w`.
pub const CHI2_TOL: f64 = 1e-10;

/// Chi-square(d) CDF via the regularized lower incomplete gamma function.
pub fn chi2_cdf(d: usize, c: f64) -> f64 {
    if c <= 0.0 {
        0.0
    } else {
        gamma_lr(d as f64 / 2.0, c / 2.0)
    }
}

/// Smallest `c_w` with `P(wᵀw ≤ c_w) ≥ 1 − δ` for `w ~ N(0, I_d)`.
pub fn chi2_bound(d: usize, delta: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::arg("noise dimension must be at least 1"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::arg("δ must lie in (0, 1)"));
    }
    let target = 1.0 - delta;
    let mut lo = 0.0;
    let mut hi = d as f64;
    while chi2_cdf(d, hi) < target {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > CHI2_TOL * 1e-2 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if chi2_cdf(d, mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
