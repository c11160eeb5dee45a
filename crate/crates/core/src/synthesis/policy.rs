use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sup-norm convergence tolerance of unbounded value iteration.
pub const FIXPOINT_TOL: f64 = 1e-9;
/// Iteration cap of unbounded value iteration.
pub const MAX_ITERATIONS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "steps")]
pub enum Horizon {
    Finite(usize),
    Unbounded,
}

/// Which operator produced a value table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// Plain maximal reachability.
    Standard,
    /// Robust lower bound: `−δ` inside the truncation.
    Lower,
    /// Upper bound: `+δ` inside the truncation.
    Upper,
}

/// Values `V(x, q)` stored row-major `x * num_locations + q`, together with
/// the first-step values `W(x, q)` used for initial-state bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueTable {
    pub num_states: usize,
    pub num_locations: usize,
    pub values: Vec<f64>,
    /// `L(W₀(x) ∓ δ)` for every state as the initial one.
    pub initial_values: Vec<f64>,
    pub horizon: Horizon,
    pub kind: BoundKind,
    /// Backups performed.
    pub iterations: usize,
    /// Final sup-norm change in unbounded mode.
    pub residual: f64,
}

impl ValueTable {
    pub fn value(&self, x: usize, q: usize) -> f64 {
        self.values[x * self.num_locations + q]
    }

    /// CSV with columns `state, coordinates…, location, value`.
    pub fn to_csv(&self, coords: impl Fn(usize) -> Vec<f64>, dims: usize) -> String {
        let mut s = String::from("state");
        for d in 0..dims {
            let _ = write!(s, ",x{d}");
        }
        s.push_str(",location,value\n");
        for x in 0..self.num_states {
            let c = coords(x);
            for q in 0..self.num_locations {
                let _ = write!(s, "{x}");
                for v in &c {
                    let _ = write!(s, ",{v}");
                }
                let _ = writeln!(s, ",{q},{}", self.value(x, q));
            }
        }
        s
    }
}

/// Input choices per `(state, location)` and time, plus the bound `r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustPolicy {
    pub num_states: usize,
    pub num_locations: usize,
    pub num_inputs: usize,
    pub horizon: Horizon,
    pub kind: BoundKind,
    pub eps: f64,
    pub delta: f64,
    /// Bound at `initial_state`, when one was given.
    pub r: Option<f64>,
    pub initial_state: Option<usize>,
    /// One table per time step for finite horizons, a single one otherwise.
    pub tables: Vec<Vec<u32>>,
}

impl RobustPolicy {
    /// Input index at `(x, q)` and time `k`; finite-horizon policies repeat
    /// their last table past the horizon.
    pub fn input(&self, x: usize, q: usize, k: usize) -> usize {
        let t = &self.tables[k.min(self.tables.len() - 1)];
        t[x * self.num_locations + q] as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.tables.is_empty() {
            return Err(Error::arg("policy has no tables"));
        }
        let size = self.num_states * self.num_locations;
        for t in &self.tables {
            if t.len() != size || t.iter().any(|&j| j as usize >= self.num_inputs) {
                return Err(Error::arg("policy table has the wrong size or an invalid input index"));
            }
        }
        if let Some(r) = self.r {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::arg("policy bound outside [0, 1]"));
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, serde_json::to_string(self)?)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let p: RobustPolicy = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        p.validate()?;
        Ok(p)
    }
}
