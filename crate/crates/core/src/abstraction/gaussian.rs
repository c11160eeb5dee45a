//! Standard normal probabilities accurate to about 1e−15 absolute.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::model::Rect;

/// Switch point between the series for `erf` and the continued fraction for `erfc`.
const SERIES_LIMIT: f64 = 2.5;
/// Axis truncation used for total-mass checks.
pub const TAIL_SIGMAS: f64 = 40.0;

/// `erf(x)` for `0 ≤ x`, by the all-positive series
/// `2/√π · e^{−x²} Σ 2ⁿ x^{2n+1} / (1·3···(2n+1))`.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    2.0 / PI.sqrt() * (-x2).exp() * sum
}

/// `erfc(x)` for `x ≥ SERIES_LIMIT` via the Laplace continued fraction
/// evaluated by the modified Lentz algorithm.
fn erfc_fraction(x: f64) -> f64 {
    // erfc(x) = e^{−x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..5000 {
        let a = k as f64 * 0.5;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / PI.sqrt() / f
}

pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let a = x.abs();
    let v = if a < SERIES_LIMIT { erf_series(a) } else { 1.0 - erfc_fraction(a) };
    v.copysign(x)
}

pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= SERIES_LIMIT {
        erfc_fraction(x)
    } else if x >= 0.0 {
        1.0 - erf_series(x)
    } else if x > -SERIES_LIMIT {
        1.0 + erf_series(-x)
    } else {
        2.0 - erfc_fraction(-x)
    }
}

/// Upper tail `Q(z) = 1 − Φ(z)`.
pub fn normal_sf(z: f64) -> f64 {
    if z == f64::INFINITY {
        0.0
    } else if z == f64::NEG_INFINITY {
        1.0
    } else {
        0.5 * erfc(z * FRAC_1_SQRT_2)
    }
}

/// `Φ(z)`.
pub fn normal_cdf(z: f64) -> f64 {
    normal_sf(-z)
}

/// `P(lo ≤ X ≤ hi)` for `X ~ N(mu, sigma²)`; a point mass when `sigma = 0`.
pub fn interval_mass(mu: f64, sigma: f64, lo: f64, hi: f64) -> f64 {
    if hi < lo {
        return 0.0;
    }
    if sigma == 0.0 {
        return if lo <= mu && mu <= hi { 1.0 } else { 0.0 };
    }
    let a = (lo - mu) / sigma;
    let b = (hi - mu) / sigma;
    let p = if a >= 0.0 {
        normal_sf(a) - normal_sf(b)
    } else if b <= 0.0 {
        normal_sf(-b) - normal_sf(-a)
    } else {
        1.0 - normal_sf(-a) - normal_sf(b)
    };
    p.clamp(0.0, 1.0)
}

/// Mass of an axis-aligned cell under a Gaussian with diagonal covariance.
pub fn cell_probability(mean: &[f64], variances: &[f64], cell: &Rect) -> f64 {
    debug_assert_eq!(mean.len(), cell.dim());
    debug_assert_eq!(variances.len(), cell.dim());
    (0..cell.dim()).map(|d| interval_mass(mean[d], variances[d].sqrt(), cell.lo[d], cell.hi[d])).product()
}
