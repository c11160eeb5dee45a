use crate::error::{Error, Result};
use crate::logic::{Dfa, Letter};
use crate::mdp::FiniteMdp;
use crate::synthesis::Horizon;

/// Cap on product states for exact evaluation.
pub const MAX_EXACT_STATES: usize = 50_000_000;
const UNBOUNDED_TOL: f64 = 1e-15;
const UNBOUNDED_CAP: usize = 1_000_000;

/// Exact probability that the DFA accepts the label sequence of a finite MDP
/// started in `x0` under the policy `choose(x, q, k)`, by forward propagation
/// of the product distribution.
pub fn exact_eval_finite(
    mdp: &FiniteMdp,
    labels: &[Letter],
    dfa: &Dfa,
    choose: impl Fn(usize, usize, usize) -> usize,
    horizon: Horizon,
    x0: usize,
) -> Result<f64> {
    let n = mdp.num_states();
    let nq = dfa.num_locations();
    if labels.len() != n || x0 >= n {
        return Err(Error::dim("labels or initial state do not match the MDP"));
    }
    if n.saturating_mul(nq) > MAX_EXACT_STATES {
        return Err(Error::ResourceCap { what: "product states for exact evaluation", limit: MAX_EXACT_STATES });
    }
    let q_init = dfa.step(dfa.initial(), labels[x0])?;
    if dfa.is_accepting(q_init) {
        return Ok(1.0);
    }
    let mut dist = vec![0.0; n * nq];
    dist[x0 * nq + q_init] = 1.0;
    let mut accepted = 0.0;
    let steps = match horizon {
        Horizon::Finite(s) => s,
        Horizon::Unbounded => UNBOUNDED_CAP,
    };
    for k in 0..steps {
        let mut next = vec![0.0; n * nq];
        let mut gained = 0.0;
        for x in 0..n {
            for q in 0..nq {
                let mass = dist[x * nq + q];
                if mass == 0.0 {
                    continue;
                }
                let j = choose(x, q, k);
                if j >= mdp.num_inputs() {
                    return Err(Error::arg("policy chose an invalid input"));
                }
                for &(y, p) in mdp.row(x, j) {
                    let q2 = dfa.step_unchecked(q, labels[y as usize]);
                    if dfa.is_accepting(q2) {
                        gained += mass * p;
                    } else {
                        next[y as usize * nq + q2] += mass * p;
                    }
                }
            }
        }
        accepted += gained;
        dist = next;
        if horizon == Horizon::Unbounded && gained < UNBOUNDED_TOL && k > n * nq {
            break;
        }
    }
    Ok(accepted.min(1.0))
}
