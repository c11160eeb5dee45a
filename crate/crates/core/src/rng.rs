//! Reproducible random streams.
//!
//! Each stream is a ChaCha8 generator keyed by a 64-bit seed with an
//! independent stream number, so run `i` of an experiment draws from
//! `(seed, i)` regardless of scheduling. Uniforms use the top 53 bits of a
//! 64-bit word; normals use the Box–Muller transform, caching the second
//! variate of each pair.

use std::f64::consts::TAU;

use rand_chacha::ChaCha8Rng;
use rand_core::{Rng, SeedableRng};

use crate::linalg::Vector;

#[derive(Clone, Debug)]
pub struct StreamRng {
    inner: ChaCha8Rng,
    spare: Option<f64>,
}

impl StreamRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        StreamRng { inner, spare: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n.saturating_sub(1))
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let r = (-2.0 * self.uniform().ln()).sqrt();
        let theta = TAU * self.uniform();
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn normal_vector(&mut self, d: usize) -> Vector {
        Vector::from_iterator(d, (0..d).map(|_| self.normal()))
    }

    /// Uniform direction on the unit sphere in ℝᵈ.
    pub fn unit_vector(&mut self, d: usize) -> Vector {
        loop {
            let v = self.normal_vector(d);
            let n = v.norm();
            if n > 1e-12 {
                return v / n;
            }
        }
    }
}
