use super::backup::{backup_fixed, backup_max, truncate};
use super::policy::{BoundKind, Horizon, RobustPolicy, ValueTable, FIXPOINT_TOL, MAX_ITERATIONS};
use crate::error::{Error, Result};
use crate::mdp::FiniteMdp;

/// Cap on `|X| · |Q|` value entries.
pub const MAX_PRODUCT_ENTRIES: usize = 200_000_000;

/// A reachability-type objective on `X × Q`: `first_step(V)` maps values to
/// the integrand `W(k, q)` of the next backup.
pub(crate) struct Objective<'a> {
    pub mdp: &'a FiniteMdp,
    pub nq: usize,
    /// Location used for initial-state bounds.
    pub q0: usize,
    pub first_step: Box<dyn Fn(&[f64]) -> Vec<f64> + Sync + 'a>,
}

pub(crate) fn shift_for(kind: BoundKind, delta: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(Error::arg("δ must be nonnegative"));
    }
    Ok(match kind {
        BoundKind::Standard => 0.0,
        BoundKind::Lower => -delta,
        BoundKind::Upper => delta,
    })
}

/// Optimal values and a maximizing policy.
pub(crate) fn solve(
    obj: &Objective,
    kind: BoundKind,
    eps: f64,
    delta: f64,
    horizon: Horizon,
    initial: Option<usize>,
) -> Result<(ValueTable, RobustPolicy)> {
    let n = obj.mdp.num_states();
    let nq = obj.nq;
    if n.checked_mul(nq).is_none_or(|s| s > MAX_PRODUCT_ENTRIES) {
        return Err(Error::ResourceCap { what: "product value entries", limit: MAX_PRODUCT_ENTRIES });
    }
    if initial.is_some_and(|x| x >= n) {
        return Err(Error::arg("initial state out of range"));
    }
    let shift = shift_for(kind, delta)?;
    let mut v = vec![0.0; n * nq];
    let mut tables: Vec<Vec<u32>> = Vec::new();
    let mut iterations = 0;
    let mut residual = 0.0;
    match horizon {
        Horizon::Finite(steps) => {
            for _ in 0..steps {
                let w = (obj.first_step)(&v);
                let (next, mu) = backup_max(obj.mdp, &w, nq, shift);
                v = next;
                tables.push(mu);
                iterations += 1;
            }
            tables.reverse();
            if tables.is_empty() {
                tables.push(vec![0; n * nq]);
            }
        }
        Horizon::Unbounded => {
            let mut last = vec![0; n * nq];
            loop {
                let w = (obj.first_step)(&v);
                let (next, mu) = backup_max(obj.mdp, &w, nq, shift);
                residual = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                v = next;
                last = mu;
                iterations += 1;
                if residual < FIXPOINT_TOL || iterations >= MAX_ITERATIONS {
                    break;
                }
            }
            tables.push(last);
        }
    }
    finish(obj, kind, eps, delta, horizon, initial, v, tables, iterations, residual, shift)
}

/// Exact values of a fixed policy (time-varying tables are indexed by step).
pub(crate) fn evaluate(
    obj: &Objective,
    policy: &RobustPolicy,
    horizon: Horizon,
    initial: Option<usize>,
) -> Result<ValueTable> {
    let n = obj.mdp.num_states();
    let nq = obj.nq;
    if policy.num_states != n || policy.num_locations != nq || policy.num_inputs != obj.mdp.num_inputs() {
        return Err(Error::dim("policy does not match the MDP"));
    }
    policy.validate()?;
    let shift = 0.0;
    let mut v = vec![0.0; n * nq];
    let mut iterations = 0;
    let mut residual = 0.0;
    match horizon {
        Horizon::Finite(steps) => {
            for k in (0..steps).rev() {
                let w = (obj.first_step)(&v);
                v = backup_fixed(obj.mdp, &w, nq, shift, &policy.tables[k.min(policy.tables.len() - 1)]);
                iterations += 1;
            }
        }
        Horizon::Unbounded => loop {
            let w = (obj.first_step)(&v);
            let next = backup_fixed(obj.mdp, &w, nq, shift, &policy.tables[0]);
            residual = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            v = next;
            iterations += 1;
            if residual < FIXPOINT_TOL || iterations >= MAX_ITERATIONS {
                break;
            }
        },
    }
    let (table, _) = finish(obj, BoundKind::Standard, 0.0, 0.0, horizon, initial, v, policy.tables.clone(), iterations, residual, shift)?;
    Ok(table)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    obj: &Objective,
    kind: BoundKind,
    eps: f64,
    delta: f64,
    horizon: Horizon,
    initial: Option<usize>,
    v: Vec<f64>,
    tables: Vec<Vec<u32>>,
    iterations: usize,
    residual: f64,
    shift: f64,
) -> Result<(ValueTable, RobustPolicy)> {
    let n = obj.mdp.num_states();
    let nq = obj.nq;
    let w0 = (obj.first_step)(&v);
    let initial_values: Vec<f64> = (0..n).map(|x| truncate(w0[x * nq + obj.q0] + shift)).collect();
    let r = initial.map(|x| initial_values[x]);
    let table = ValueTable { num_states: n, num_locations: nq, values: v, initial_values, horizon, kind, iterations, residual };
    let policy = RobustPolicy {
        num_states: n,
        num_locations: nq,
        num_inputs: obj.mdp.num_inputs(),
        horizon,
        kind,
        eps,
        delta,
        r,
        initial_state: initial,
        tables,
    };
    Ok((table, policy))
}
