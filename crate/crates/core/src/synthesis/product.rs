use super::driver::{evaluate, solve, Objective};
use super::policy::{BoundKind, Horizon, RobustPolicy, ValueTable};
use crate::abstraction::FiniteAbstraction;
use crate::error::{Error, Result};
use crate::logic::{Dfa, Letter};
use crate::mdp::FiniteMdp;
use crate::model::LabellingMap;

/// Possible letters per abstract state; `None` marks the sink, which never
/// triggers acceptance.
pub type LetterSets = Vec<Option<Vec<Letter>>>;

/// Relaxed letter sets at representative points, with ε inflated by the
/// output radius of a cell.
pub fn relaxed_letter_sets(abs: &FiniteAbstraction, lab: &LabellingMap, eps: f64) -> Result<LetterSets> {
    if lab.dim() != abs.c1.nrows() {
        return Err(Error::dim("labelling dimension differs from the output dimension"));
    }
    let radius = eps + abs.output_margin();
    let mut sets = (0..abs.num_cells())
        .map(|i| lab.relaxed_labels(&abs.output_of(i), radius).map(Some))
        .collect::<Result<LetterSets>>()?;
    sets.push(None);
    Ok(sets)
}

fn objective<'a>(mdp: &'a FiniteMdp, dfa: &'a Dfa, letters: &'a [Option<Vec<Letter>>]) -> Result<Objective<'a>> {
    let n = mdp.num_states();
    if letters.len() != n {
        return Err(Error::dim("one letter set per state is required"));
    }
    let nq = dfa.num_locations();
    let sigma = dfa.alphabet_size();
    let mut succ: Vec<Option<Vec<u32>>> = Vec::with_capacity(n * nq);
    for set in letters {
        for q in 0..nq {
            match set {
                None => succ.push(None),
                Some(ls) => {
                    if ls.is_empty() {
                        return Err(Error::arg("empty letter set"));
                    }
                    let mut s = Vec::with_capacity(ls.len());
                    for &l in ls {
                        if l.0 as usize >= sigma {
                            return Err(Error::LetterOutOfAlphabet(l.0));
                        }
                        s.push(dfa.step_unchecked(q, l) as u32);
                    }
                    s.sort_unstable();
                    s.dedup();
                    succ.push(Some(s));
                }
            }
        }
    }
    let accepting: Vec<bool> = (0..nq).map(|q| dfa.is_accepting(q)).collect();
    let first_step = move |v: &[f64]| -> Vec<f64> {
        succ.iter()
            .enumerate()
            .map(|(idx, s)| {
                let k = idx / nq;
                match s {
                    None => {
                        if accepting[idx % nq] {
                            1.0
                        } else {
                            0.0
                        }
                    }
                    Some(s) => s
                        .iter()
                        .map(|&q2| if accepting[q2 as usize] { 1.0 } else { v[k * nq + q2 as usize] })
                        .fold(f64::INFINITY, f64::min),
                }
            })
            .collect()
    };
    Ok(Objective { mdp, nq, q0: dfa.initial(), first_step: Box::new(first_step) })
}

/// Robust values on the implicit product of an MDP with a DFA:
/// `V(x,q) = 𝐋(max_j Σ_k T[x][j][k] min_{q′∈t̄(q,k)} [1_F(q′) + 1_{Q∖F}(q′)V(k,q′)] − δ)`.
pub fn product_reach(
    mdp: &FiniteMdp,
    dfa: &Dfa,
    letters: &[Option<Vec<Letter>>],
    eps: f64,
    delta: f64,
    horizon: Horizon,
    initial: Option<usize>,
) -> Result<(ValueTable, RobustPolicy)> {
    solve(&objective(mdp, dfa, letters)?, BoundKind::Lower, eps, delta, horizon, initial)
}

/// Values of a fixed product policy.
pub fn evaluate_product(
    mdp: &FiniteMdp,
    dfa: &Dfa,
    letters: &[Option<Vec<Letter>>],
    policy: &RobustPolicy,
    horizon: Horizon,
    initial: Option<usize>,
) -> Result<ValueTable> {
    evaluate(&objective(mdp, dfa, letters)?, policy, horizon, initial)
}

/// `(ε, δ)`-robust satisfaction of a DFA specification on an abstraction.
pub fn robust_scltl(
    abs: &FiniteAbstraction,
    dfa: &Dfa,
    lab: &LabellingMap,
    eps: f64,
    delta: f64,
    horizon: Horizon,
    initial: Option<usize>,
) -> Result<(ValueTable, RobustPolicy)> {
    if dfa.atoms() != lab.atoms() {
        return Err(Error::arg("DFA and labelling use different atom lists"));
    }
    let letters = relaxed_letter_sets(abs, lab, eps)?;
    product_reach(&abs.mdp, dfa, &letters, eps, delta, horizon, initial)
}
