//! Finite MDPs with sparse transition rows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on row sums.
pub const STOCHASTIC_TOL: f64 = 1e-12;
/// Entries below this are dropped from stored rows.
pub const DROP_THRESHOLD: f64 = 1e-15;

/// Finite MDP with `num_states × num_inputs` rows; row `i * num_inputs + j`
/// holds `(successor, probability)` pairs sorted by successor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MdpFile", into = "MdpFile")]
pub struct FiniteMdp {
    num_states: usize,
    num_inputs: usize,
    rows: Vec<Vec<(u32, f64)>>,
}

impl FiniteMdp {
    /// Validate sparse rows: indices in range, probabilities in `[0, 1]`,
    /// rows summing to one within [`STOCHASTIC_TOL`].
    pub fn new(num_states: usize, num_inputs: usize, mut rows: Vec<Vec<(u32, f64)>>) -> Result<Self> {
        if num_states == 0 || num_inputs == 0 {
            return Err(Error::arg("MDP needs at least one state and one input"));
        }
        if rows.len() != num_states * num_inputs {
            return Err(Error::dim(format!("expected {} rows, got {}", num_states * num_inputs, rows.len())));
        }
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_unstable_by_key(|e| e.0);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::arg(format!("row {r} repeats a successor")));
            }
            let mut sum = 0.0;
            for &(k, p) in row.iter() {
                if k as usize >= num_states {
                    return Err(Error::arg(format!("row {r} has successor {k} out of range")));
                }
                if !(0.0..=1.0 + STOCHASTIC_TOL).contains(&p) {
                    return Err(Error::arg(format!("row {r} has probability {p} outside [0,1]")));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::arg(format!("row {r} sums to {sum}")));
            }
        }
        Ok(FiniteMdp { num_states, num_inputs, rows })
    }

    /// Build from a dense tensor `t[i][j][k]`.
    pub fn from_dense(t: &[Vec<Vec<f64>>]) -> Result<Self> {
        let n = t.len();
        let m = t.first().map_or(0, |r| r.len());
        let mut rows = Vec::with_capacity(n * m);
        for (i, ti) in t.iter().enumerate() {
            if ti.len() != m {
                return Err(Error::dim(format!("state {i} has {} inputs, expected {m}", ti.len())));
            }
            for tij in ti {
                if tij.len() != n {
                    return Err(Error::dim("dense row length differs from the state count"));
                }
                rows.push(tij.iter().enumerate().filter(|(_, &p)| p != 0.0).map(|(k, &p)| (k as u32, p)).collect());
            }
        }
        FiniteMdp::new(n, m, rows)
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    #[inline]
    pub fn row(&self, state: usize, input: usize) -> &[(u32, f64)] {
        &self.rows[state * self.num_inputs + input]
    }

    /// Dense probability `T[i][j][k]`.
    pub fn prob(&self, i: usize, j: usize, k: usize) -> f64 {
        let row = self.row(i, j);
        row.binary_search_by_key(&(k as u32), |e| e.0).map_or(0.0, |pos| row[pos].1)
    }

    /// `Σ_k T[i][j][k] f(k)`.
    #[inline]
    pub fn expect(&self, i: usize, j: usize, f: impl Fn(usize) -> f64) -> f64 {
        self.row(i, j).iter().map(|&(k, p)| p * f(k as usize)).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.num_states)
            .map(|i| {
                (0..self.num_inputs)
                    .map(|j| {
                        let mut v = vec![0.0; self.num_states];
                        for &(k, p) in self.row(i, j) {
                            v[k as usize] = p;
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    }
}

/// JSON form: one entry per row, each a list of `[successor, probability]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MdpFile {
    pub states: usize,
    pub inputs: usize,
    pub rows: Vec<Vec<(u32, f64)>>,
}

impl TryFrom<MdpFile> for FiniteMdp {
    type Error = Error;
    fn try_from(f: MdpFile) -> Result<Self> {
        FiniteMdp::new(f.states, f.inputs, f.rows)
    }
}

impl From<FiniteMdp> for MdpFile {
    fn from(m: FiniteMdp) -> Self {
        MdpFile { states: m.num_states, inputs: m.num_inputs, rows: m.rows }
    }
}
