use super::driver::{evaluate, solve, Objective};
use super::policy::{BoundKind, Horizon, RobustPolicy, ValueTable};
use super::targets::{dilate_target, erode_target};
use crate::abstraction::FiniteAbstraction;
use crate::error::{Error, Result};
use crate::mdp::FiniteMdp;
use crate::model::Rect;

fn objective<'a>(mdp: &'a FiniteMdp, target: &'a [bool]) -> Result<Objective<'a>> {
    if target.len() != mdp.num_states() {
        return Err(Error::dim("target mask length differs from the state count"));
    }
    Ok(Objective {
        mdp,
        nq: 1,
        q0: 0,
        first_step: Box::new(move |v: &[f64]| target.iter().zip(v).map(|(&t, &x)| if t { 1.0 } else { x }).collect()),
    })
}

/// Reachability of `target` under the chosen operator:
/// `V(i) = 𝐋(max_j Σ_k T[i][j][k](1_K(k) + 1_{K∁}(k)V(k)) ∓ δ)`.
pub fn reach(
    mdp: &FiniteMdp,
    target: &[bool],
    kind: BoundKind,
    delta: f64,
    horizon: Horizon,
    initial: Option<usize>,
) -> Result<(ValueTable, RobustPolicy)> {
    let delta = if kind == BoundKind::Standard { 0.0 } else { delta };
    solve(&objective(mdp, target)?, kind, 0.0, delta, horizon, initial)
}

pub fn standard_reach(mdp: &FiniteMdp, target: &[bool], horizon: Horizon, initial: Option<usize>) -> Result<(ValueTable, RobustPolicy)> {
    reach(mdp, target, BoundKind::Standard, 0.0, horizon, initial)
}

/// Values of a fixed policy (the recursion without the supremum).
pub fn evaluate_reach(mdp: &FiniteMdp, target: &[bool], policy: &RobustPolicy, horizon: Horizon, initial: Option<usize>) -> Result<ValueTable> {
    evaluate(&objective(mdp, target)?, policy, horizon, initial)
}

/// `(ε, δ)`-robust lower bound on the abstraction: `T_δ` on the eroded target.
pub fn robust_reach(
    abs: &FiniteAbstraction,
    k: &[Rect],
    eps: f64,
    delta: f64,
    horizon: Horizon,
    initial: Option<usize>,
) -> Result<(ValueTable, RobustPolicy)> {
    let t = erode_target(abs, k, eps)?;
    let (v, mut p) = reach(&abs.mdp, &t.states, BoundKind::Lower, delta, horizon, initial)?;
    p.eps = eps;
    Ok((v, p))
}

/// Upper bound: `T_{−δ}` on the dilated target; the sink counts as target.
pub fn upper_bound_reach(
    abs: &FiniteAbstraction,
    k: &[Rect],
    eps: f64,
    delta: f64,
    horizon: Horizon,
    initial: Option<usize>,
) -> Result<(ValueTable, RobustPolicy)> {
    let t = dilate_target(abs, k, eps)?;
    let (v, mut p) = reach(&abs.mdp, &t.states, BoundKind::Upper, delta, horizon, initial)?;
    p.eps = eps;
    Ok((v, p))
}
