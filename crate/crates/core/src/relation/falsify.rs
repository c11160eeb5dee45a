use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certify::SimulationCertificate;
use crate::error::Result;
use crate::linalg::{sym_inv_sqrt, sym_sqrt, Mat, Vector};
use crate::rng::StreamRng;

/// Relative slack before a sample counts as a violation.
const VIOLATION_RTOL: f64 = 1e-9;
const ASCENT_STARTS: usize = 64;
const ASCENT_ITERS: usize = 200;

/// An admissible tuple violating the invariance condition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub x_bar: Vec<f64>,
    pub u: Vec<f64>,
    pub w: Vec<f64>,
    pub beta: Vec<f64>,
    /// `(Āx̄ + B̄u + B̄_w w − Pβ)ᵀ M (·)`.
    pub value: f64,
    pub eps_sq: f64,
}

/// The invariance condition in whitened coordinates: with `s = M^{1/2}x̄/ε`,
/// the successor error is `Gx s + Gu u + Gw w − Gb β` in the M^{1/2} frame.
struct Whitened {
    gx: Mat,
    gu: Mat,
    gw: Mat,
    gb: Mat,
    ru: f64,
    rw: f64,
    widths: Vec<f64>,
    msi: Mat,
    eps: f64,
}

impl Whitened {
    fn new(c: &SimulationCertificate) -> Result<Self> {
        let ms = sym_sqrt(&c.m)?;
        let msi = sym_inv_sqrt(&c.m)?;
        Ok(Whitened {
            gx: &ms * &c.a_bar * &msi * c.eps,
            gu: &ms * &c.b_bar,
            gw: &ms * &c.bw_bar,
            gb: &ms * &c.p,
            ru: c.c_u.max(0.0).sqrt(),
            rw: c.c_w.max(0.0).sqrt(),
            widths: c.widths.clone(),
            msi,
            eps: c.eps,
        })
    }

    fn image(&self, s: &Vector, u: &Vector, w: &Vector, beta: &Vector) -> Vector {
        &self.gx * s + &self.gu * u + &self.gw * w - &self.gb * beta
    }

    fn counterexample(&self, s: &Vector, u: &Vector, w: &Vector, beta: &Vector) -> Option<Counterexample> {
        let value = self.image(s, u, w, beta).norm_squared();
        let eps_sq = self.eps * self.eps;
        (value > eps_sq * (1.0 + VIOLATION_RTOL) + f64::MIN_POSITIVE).then(|| Counterexample {
            x_bar: (&self.msi * s * self.eps).as_slice().to_vec(),
            u: u.as_slice().to_vec(),
            w: w.as_slice().to_vec(),
            beta: beta.as_slice().to_vec(),
            value,
            eps_sq,
        })
    }

    fn random_tuple(&self, rng: &mut StreamRng) -> (Vector, Vector, Vector, Vector) {
        let s = rng.unit_vector(self.gx.ncols());
        let u = rng.unit_vector(self.gu.ncols()) * self.ru;
        let w = rng.unit_vector(self.gw.ncols()) * self.rw;
        let beta = Vector::from_iterator(
            self.widths.len(),
            self.widths.iter().map(|&d| if rng.uniform() < 0.5 { -d } else { d }),
        );
        (s, u, w, beta)
    }

    /// Best response of every block to the output direction `v`.
    fn align(&self, v: &Vector) -> (Vector, Vector, Vector, Vector) {
        let unit = |g: &Mat, r: f64| {
            let d = g.transpose() * v;
            let n = d.norm();
            if n > 0.0 {
                d * (r / n)
            } else {
                Vector::zeros(g.ncols())
            }
        };
        let gbv = self.gb.transpose() * v;
        let beta = Vector::from_iterator(
            self.widths.len(),
            self.widths.iter().zip(gbv.iter()).map(|(&d, &g)| if g > 0.0 { -d } else { d }),
        );
        (unit(&self.gx, 1.0), unit(&self.gu, self.ru), unit(&self.gw, self.rw), beta)
    }

    /// Alternating maximization of the (convex) successor norm.
    fn ascend(&self, rng: &mut StreamRng) -> Option<Counterexample> {
        let (mut s, mut u, mut w, mut beta) = self.random_tuple(rng);
        let mut best = -1.0;
        for _ in 0..ASCENT_ITERS {
            if let Some(cx) = self.counterexample(&s, &u, &w, &beta) {
                return Some(cx);
            }
            let y = self.image(&s, &u, &w, &beta);
            let val = y.norm();
            if val <= best * (1.0 + 1e-15) || val == 0.0 {
                break;
            }
            best = val;
            (s, u, w, beta) = self.align(&(y / val));
        }
        self.counterexample(&s, &u, &w, &beta)
    }
}

/// Search admissible boundary tuples for a violation of
/// `(Āx̄ + B̄u + B̄_w w − Pβ)ᵀM(·) ≤ ε²`. Runs a few deterministic ascent
/// chains, then `samples` random boundary draws; returns the first violation.
pub fn falsify(cert: &SimulationCertificate, samples: usize, seed: u64) -> Result<Option<Counterexample>> {
    let wh = Whitened::new(cert)?;
    let starts = ASCENT_STARTS.min(samples.max(1));
    let ascent = (0..starts).into_par_iter().find_map_first(|i| wh.ascend(&mut StreamRng::new(seed, i as u64)));
    if ascent.is_some() {
        return Ok(ascent);
    }
    const CHUNK: usize = 4096;
    let chunks = samples.div_ceil(CHUNK);
    Ok((0..chunks).into_par_iter().find_map_first(|c| {
        let mut rng = StreamRng::new(seed, (starts + c) as u64);
        let len = CHUNK.min(samples - c * CHUNK);
        (0..len).find_map(|_| {
            let (s, u, w, beta) = wh.random_tuple(&mut rng);
            wh.counterexample(&s, &u, &w, &beta)
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::ReducedModel;
    use crate::model::LinearGaussianModel;
    use crate::relation::{certify, CertInputs};

    fn scalar_cert(widths: f64, bw2: f64) -> SimulationCertificate {
        let model = LinearGaussianModel::new(
            Mat::from_element(1, 1, 0.5),
            Mat::from_element(1, 1, 1.0),
            Mat::from_element(1, 1, bw2),
            Mat::from_element(1, 1, 1.0),
            0.0,
            Vector::zeros(1),
        )
        .unwrap();
        let red = ReducedModel {
            a1: Mat::from_element(1, 1, 0.5),
            b1: Mat::from_element(1, 1, 1.0),
            bw1: Mat::zeros(1, 1),
            c1: Mat::from_element(1, 1, 1.0),
            p: Mat::from_element(1, 1, 1.0),
            hankel: vec![],
        };
        let inp = CertInputs {
            model: &model,
            reduced: &red,
            q: Mat::zeros(1, 1),
            r: Mat::identity(1, 1),
            k: Mat::zeros(1, 1),
            m: Mat::identity(1, 1),
            widths: vec![widths],
        };
        certify(&inp, 0.05).unwrap()
    }

    #[test]
    fn certified_scalar_has_no_counterexample() {
        let c = scalar_cert(0.0, 0.1);
        assert!(falsify(&c, 100_000, 3).unwrap().is_none());
    }

    #[test]
    fn halved_eps_is_falsified() {
        let c = scalar_cert(0.0, 0.1);
        let half = c.with_eps(c.eps / 2.0);
        let cx = falsify(&half, 10_000, 3).unwrap().expect("violation");
        assert!(cx.value > cx.eps_sq);
    }
}
