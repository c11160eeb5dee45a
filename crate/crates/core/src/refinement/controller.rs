use serde::{Deserialize, Serialize};

use crate::abstraction::{GridPartition, ReducedModel};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};
use crate::logic::{Dfa, Letter};
use crate::model::{LabellingMap, LinearGaussianModel};
use crate::relation::{initial_abstract_state, project_initial, SimulationCertificate};
use crate::synthesis::RobustPolicy;

/// Relative tolerance on the noise reconstruction residual.
pub const RECONSTRUCTION_RTOL: f64 = 1e-8;

/// Everything a refined controller reads; shared by all runs.
#[derive(Clone, Debug)]
pub struct RefinementContext {
    pub model: LinearGaussianModel,
    pub reduced: ReducedModel,
    pub grid: GridPartition,
    pub inputs: Vec<Vec<f64>>,
    pub policy: RobustPolicy,
    pub cert: SimulationCertificate,
    pub dfa: Dfa,
    pub labels: LabellingMap,
    bw_pinv: Mat,
}

impl RefinementContext {
    pub fn new(
        model: LinearGaussianModel,
        reduced: ReducedModel,
        grid: GridPartition,
        inputs: Vec<Vec<f64>>,
        policy: RobustPolicy,
        cert: SimulationCertificate,
        dfa: Dfa,
        labels: LabellingMap,
    ) -> Result<Self> {
        if linalg::rank(&model.bw, 1e-12) < model.noise_dim() {
            return Err(Error::Singular("B_w2 must have full column rank for noise reconstruction".into()));
        }
        if dfa.atoms() != labels.atoms() {
            return Err(Error::arg("DFA and labelling use different atom lists"));
        }
        if policy.num_states != grid.num_cells() + 1 || policy.num_locations != dfa.num_locations() {
            return Err(Error::dim("policy does not match the abstraction and DFA"));
        }
        if policy.num_inputs != inputs.len() {
            return Err(Error::dim("policy input count differs from the input list"));
        }
        let bw_pinv = linalg::pinv(&model.bw, 1e-12);
        Ok(RefinementContext { model, reduced, grid, inputs, policy, cert, dfa, labels, bw_pinv })
    }

    pub fn label(&self, x2: &Vector) -> Letter {
        self.labels.label_of((&self.model.c * x2).as_slice())
    }

    /// Recover `w` from `x₂′ = A₂x₂ + B₂u₂ + B_{w2}w`.
    pub fn reconstruct_noise(&self, x2_prev: &Vector, u2: &Vector, x2_next: &Vector) -> Result<Vector> {
        let m = &self.model;
        let rhs = x2_next - &m.a * x2_prev - &m.b * u2;
        let w = &self.bw_pinv * &rhs;
        let res = (&m.bw * &w - &rhs).norm();
        let scale = x2_next.norm() + (&m.a * x2_prev).norm() + (&m.b * u2).norm();
        if res > RECONSTRUCTION_RTOL * scale.max(1.0) {
            return Err(Error::Infeasible(format!("noise reconstruction residual {res:e}: model mismatch")));
        }
        Ok(w)
    }

    /// Next abstract state `Π(A₁z + B₁u₁ + B_{w1}w)`; `None` when it leaves the grid.
    pub fn update_abstract(&self, x1: usize, u1: &Vector, w: &Vector) -> Option<usize> {
        let z = Vector::from_vec(self.grid.center(x1));
        let next = &self.reduced.a1 * z + &self.reduced.b1 * u1 + &self.reduced.bw1 * w;
        self.grid.locate(next.as_slice())
    }
}

/// Output of one controller call.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlStep {
    pub u2: Vec<f64>,
    /// Abstract state used; `None` in fail-safe mode.
    pub x1: Option<usize>,
    pub u1: Option<Vec<f64>>,
    /// DFA location after reading the current concrete label.
    pub q: usize,
    pub letter: Letter,
    pub failsafe: bool,
}

/// Controller refined from an abstract policy through the interface
/// `u₂ = Ru₁ + Qz + K(x₂ − Pz)`.
#[derive(Clone, Debug)]
pub struct RefinedController<'a> {
    ctx: &'a RefinementContext,
    x1: Option<usize>,
    q: usize,
    k: usize,
    pending: Option<(Vector, Vector, Vector)>,
    failsafe_steps: usize,
}

impl<'a> RefinedController<'a> {
    /// Initialize with `x₁ = Π(P̂x₂₀)` and `q = t(q₀, 𝖫(C₂x₂₀))`. The
    /// initial relation must hold at the certificate's ε.
    pub fn new(ctx: &'a RefinementContext, x20: &Vector) -> Result<Self> {
        let init = initial_abstract_state(&ctx.cert, &ctx.grid, x20.as_slice())?;
        Ok(Self::start(ctx, x20, Some(init.index)))
    }

    /// As [`RefinedController::new`] but without the initial relation check;
    /// a projection outside the grid starts in fail-safe mode.
    pub fn new_unchecked(ctx: &'a RefinementContext, x20: &Vector) -> Result<Self> {
        let x1 = match project_initial(&ctx.cert, &ctx.grid, x20.as_slice()) {
            Ok(s) => Some(s.index),
            Err(Error::Infeasible(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(Self::start(ctx, x20, x1))
    }

    /// Start from a given abstract state.
    pub fn with_abstract_state(ctx: &'a RefinementContext, x20: &Vector, x1: usize) -> Result<Self> {
        if x1 >= ctx.grid.num_cells() {
            return Err(Error::arg("abstract state out of range"));
        }
        Ok(Self::start(ctx, x20, Some(x1)))
    }

    fn start(ctx: &'a RefinementContext, x20: &Vector, x1: Option<usize>) -> Self {
        let q = ctx.dfa.step_unchecked(ctx.dfa.initial(), ctx.label(x20));
        RefinedController { ctx, x1, q, k: 0, pending: None, failsafe_steps: 0 }
    }

    pub fn abstract_state(&self) -> Option<usize> {
        self.x1
    }

    pub fn location(&self) -> usize {
        self.q
    }

    pub fn time(&self) -> usize {
        self.k
    }

    pub fn failsafe_steps(&self) -> usize {
        self.failsafe_steps
    }

    /// Input for the measured state `x₂`. From the second call on, the
    /// abstract state and DFA location first advance using `x₂`.
    pub fn step(&mut self, x2: &Vector) -> Result<ControlStep> {
        let ctx = self.ctx;
        if x2.len() != ctx.model.state_dim() {
            return Err(Error::dim("measured state has the wrong dimension"));
        }
        let letter = ctx.label(x2);
        if let Some((x_prev, u2_prev, u1_prev)) = self.pending.take() {
            if let Some(x1) = self.x1 {
                let w = ctx.reconstruct_noise(&x_prev, &u2_prev, x2)?;
                self.x1 = ctx.update_abstract(x1, &u1_prev, &w);
            }
            self.q = ctx.dfa.step_unchecked(self.q, letter);
            self.k += 1;
        }
        let out = match self.x1 {
            Some(x1) => {
                let j = ctx.policy.input(x1, self.q, self.k);
                let u1 = Vector::from_vec(ctx.inputs[j].clone());
                let z = Vector::from_vec(ctx.grid.center(x1));
                let c = &ctx.cert;
                let u2 = &c.r * &u1 + &c.q * &z + &c.k * (x2 - &c.p * &z);
                self.pending = Some((x2.clone(), u2.clone(), u1.clone()));
                ControlStep {
                    u2: u2.as_slice().to_vec(),
                    x1: Some(x1),
                    u1: Some(u1.as_slice().to_vec()),
                    q: self.q,
                    letter,
                    failsafe: false,
                }
            }
            None => {
                self.failsafe_steps += 1;
                let u2 = &ctx.cert.k * x2;
                self.pending = Some((x2.clone(), u2.clone(), Vector::zeros(ctx.reduced.b1.ncols())));
                ControlStep { u2: u2.as_slice().to_vec(), x1: None, u1: None, q: self.q, letter, failsafe: true }
            }
        };
        Ok(out)
    }
}
