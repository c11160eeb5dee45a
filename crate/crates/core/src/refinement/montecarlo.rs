use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::controller::{RefinedController, RefinementContext};
use crate::error::Result;
use crate::linalg::Vector;
use crate::logic::{Dfa, Letter};
use crate::model::{LabellingMap, LinearGaussianModel};
use crate::rng::StreamRng;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Anything producing a concrete input from the measured state.
pub trait Controller {
    fn control(&mut self, x2: &Vector) -> Result<Vector>;
    /// Abstract state and input used at the last call, for traces.
    fn abstract_info(&self) -> (Option<usize>, Option<Vec<f64>>) {
        (None, None)
    }
    fn in_failsafe(&self) -> bool {
        false
    }
}

/// Adapter recording the last step of a refined controller.
pub struct Refined<'a> {
    pub inner: RefinedController<'a>,
    last: Option<super::controller::ControlStep>,
}

impl<'a> Refined<'a> {
    pub fn new(inner: RefinedController<'a>) -> Self {
        Refined { inner, last: None }
    }
}

impl Controller for Refined<'_> {
    fn control(&mut self, x2: &Vector) -> Result<Vector> {
        let s = self.inner.step(x2)?;
        let u = Vector::from_vec(s.u2.clone());
        self.last = Some(s);
        Ok(u)
    }
    fn abstract_info(&self) -> (Option<usize>, Option<Vec<f64>>) {
        self.last.as_ref().map_or((None, None), |s| (s.x1, s.u1.clone()))
    }
    fn in_failsafe(&self) -> bool {
        self.last.as_ref().is_some_and(|s| s.failsafe)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accepted,
    HorizonExhausted,
    /// Not accepted and the controller fell back to fail-safe mode.
    RelationLost,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub t: usize,
    pub x2: Vec<f64>,
    pub y2: Vec<f64>,
    pub u2: Vec<f64>,
    pub x1: Option<usize>,
    pub u1: Option<Vec<f64>>,
    /// Monitor location after reading `letter`.
    pub q: usize,
    pub letter: Letter,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub run: usize,
    pub steps: Vec<TraceStep>,
    pub verdict: Verdict,
}

impl TraceRecord {
    pub fn letters(&self) -> Vec<Letter> {
        self.steps.iter().map(|s| s.letter).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloResult {
    pub runs: usize,
    pub successes: usize,
    pub probability: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub wilson_half_width: f64,
    /// Runs in which the fail-safe mode engaged.
    pub failsafe_runs: usize,
    pub traces: Vec<TraceRecord>,
}

/// Wilson score interval `(low, high, half_width)` for `k` of `n`.
pub fn wilson_interval(k: usize, n: usize, z: f64) -> (f64, f64, f64) {
    if n == 0 {
        return (0.0, 1.0, 0.5);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if k as f64 == n { 1.0 } else { (center + half).min(1.0) };
    (lo, hi, half)
}

/// Simulation settings shared by all runs.
#[derive(Clone, Debug)]
pub struct SimulationSpec<'a> {
    pub model: &'a LinearGaussianModel,
    pub dfa: &'a Dfa,
    pub labels: &'a LabellingMap,
    pub horizon: usize,
    pub seed: u64,
    /// Number of leading runs whose traces are kept.
    pub keep_traces: usize,
}

/// Simulate one closed-loop run; the DFA monitor reads concrete labels at
/// times `0..=horizon` and the run succeeds once it reaches an accepting location.
pub fn simulate_run<C: Controller>(spec: &SimulationSpec, ctrl: &mut C, run: usize, record: bool) -> Result<TraceRecord> {
    let m = spec.model;
    let mut rng = StreamRng::new(spec.seed, run as u64);
    let mut x = m.x0.clone();
    let mut steps = Vec::new();
    let mut q = spec.dfa.initial();
    let mut lost = false;
    for t in 0..=spec.horizon {
        let y = &m.c * &x;
        let letter = spec.labels.label_of(y.as_slice());
        q = spec.dfa.step_unchecked(q, letter);
        if spec.dfa.is_accepting(q) || t == spec.horizon {
            if record {
                steps.push(TraceStep { t, x2: x.as_slice().to_vec(), y2: y.as_slice().to_vec(), u2: vec![], x1: None, u1: None, q, letter });
            }
            break;
        }
        let u = ctrl.control(&x)?;
        lost |= ctrl.in_failsafe();
        if record {
            let (x1, u1) = ctrl.abstract_info();
            steps.push(TraceStep { t, x2: x.as_slice().to_vec(), y2: y.as_slice().to_vec(), u2: u.as_slice().to_vec(), x1, u1, q, letter });
        }
        let w = rng.normal_vector(m.noise_dim());
        x = m.step(&x, &u, &w);
    }
    let verdict = if spec.dfa.is_accepting(q) {
        Verdict::Accepted
    } else if lost {
        Verdict::RelationLost
    } else {
        Verdict::HorizonExhausted
    };
    Ok(TraceRecord { run, steps, verdict })
}

/// Independent runs in parallel; run `i` uses random stream `(seed, i)`.
pub fn monte_carlo<C, F>(spec: &SimulationSpec, runs: usize, make: F) -> Result<MonteCarloResult>
where
    C: Controller,
    F: Fn() -> Result<C> + Sync,
{
    let records: Vec<(TraceRecord, bool)> = (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut c = make()?;
            let rec = simulate_run(spec, &mut c, i, i < spec.keep_traces)?;
            let lost = rec.verdict == Verdict::RelationLost;
            Ok((rec, lost))
        })
        .collect::<Result<_>>()?;
    let successes = records.iter().filter(|(r, _)| r.verdict == Verdict::Accepted).count();
    let failsafe_runs = records.iter().filter(|(_, l)| *l).count();
    let (lo, hi, half) = wilson_interval(successes, runs, Z95);
    let traces = records.into_iter().take(spec.keep_traces).map(|(r, _)| r).collect();
    Ok(MonteCarloResult {
        runs,
        successes,
        probability: if runs == 0 { 0.0 } else { successes as f64 / runs as f64 },
        wilson_low: lo,
        wilson_high: hi,
        wilson_half_width: half,
        failsafe_runs,
        traces,
    })
}

/// Monte Carlo with refined controllers built from `ctx`.
pub fn monte_carlo_refined(ctx: &RefinementContext, runs: usize, horizon: usize, seed: u64, keep_traces: usize, strict_init: bool) -> Result<MonteCarloResult> {
    let spec = SimulationSpec { model: &ctx.model, dfa: &ctx.dfa, labels: &ctx.labels, horizon, seed, keep_traces };
    monte_carlo(&spec, runs, || {
        let c = if strict_init {
            RefinedController::new(ctx, &ctx.model.x0)?
        } else {
            RefinedController::new_unchecked(ctx, &ctx.model.x0)?
        };
        Ok(Refined::new(c))
    })
}

/// CSV with columns `run, t, x2_*, y2_*, u2_*, x1, q, letter, verdict`.
pub fn traces_csv(traces: &[TraceRecord], atoms: &[String]) -> String {
    let first = traces.iter().flat_map(|t| t.steps.first()).next();
    let (n, p, m) = first.map_or((0, 0, 0), |s| {
        (s.x2.len(), s.y2.len(), traces.iter().flat_map(|t| &t.steps).map(|s| s.u2.len()).max().unwrap_or(0))
    });
    let mut out = String::from("run,t");
    for i in 0..n {
        let _ = write!(out, ",x2_{i}");
    }
    for i in 0..p {
        let _ = write!(out, ",y2_{i}");
    }
    for i in 0..m {
        let _ = write!(out, ",u2_{i}");
    }
    out.push_str(",x1,q,letter,verdict\n");
    for tr in traces {
        let verdict = match tr.verdict {
            Verdict::Accepted => "accepted",
            Verdict::HorizonExhausted => "horizon_exhausted",
            Verdict::RelationLost => "relation_lost",
        };
        for s in &tr.steps {
            let _ = write!(out, "{},{}", tr.run, s.t);
            for v in s.x2.iter().chain(&s.y2) {
                let _ = write!(out, ",{v}");
            }
            for i in 0..m {
                match s.u2.get(i) {
                    Some(v) => {
                        let _ = write!(out, ",{v}");
                    }
                    None => out.push(','),
                }
            }
            let x1 = match s.x1 {
                Some(x) => x.to_string(),
                None if s.u2.is_empty() => String::new(),
                None => String::from("sink"),
            };
            let letter = crate::logic::render_letter(s.letter, atoms);
            let _ = writeln!(out, ",{x1},{},\"{letter}\",{verdict}", s.q);
        }
    }
    out
}
