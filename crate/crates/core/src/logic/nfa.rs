//! Obligation-set NFA for core scLTL.
//!
//! A state is a conjunction of subformulas that must hold from the current
//! position on. Reading a letter unfolds every obligation one step; each
//! disjunct of the unfolding becomes a successor. The empty conjunction is
//! the accepting state: all obligations are discharged, so every extension
//! satisfies the formula.

use std::collections::HashMap;

use super::formula::Formula;
use super::letter::{Letter, MAX_ATOMS};
use crate::error::{Error, Result};

type Clause = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    True,
    Atom(usize),
    NegAtom(usize),
    And(u32, u32),
    Or(u32, u32),
    Next(u32),
    Until(u32, u32),
    Eventually(u32),
}

#[derive(Default)]
struct Arena {
    nodes: Vec<Node>,
    index: HashMap<Node, u32>,
}

impl Arena {
    fn intern(&mut self, f: &Formula) -> Result<u32> {
        let node = match f {
            Formula::True => Node::True,
            Formula::Atom(i) => Node::Atom(*i),
            Formula::NegAtom(i) => Node::NegAtom(*i),
            Formula::And(a, b) => Node::And(self.intern(a)?, self.intern(b)?),
            Formula::Or(a, b) => Node::Or(self.intern(a)?, self.intern(b)?),
            Formula::Next(a) => Node::Next(self.intern(a)?),
            Formula::Until(a, b) => Node::Until(self.intern(a)?, self.intern(b)?),
            Formula::Eventually(a) => Node::Eventually(self.intern(a)?),
            Formula::BoundedEventually(..) | Formula::BoundedAlways(..) => {
                return Err(Error::arg("bounded operators must be expanded before automaton construction"))
            }
        };
        if let Some(&id) = self.index.get(&node) {
            return Ok(id);
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        Ok(id)
    }

    fn singleton(&self, id: u32) -> Clause {
        if self.nodes[id as usize] == Node::True {
            Vec::new()
        } else {
            vec![id]
        }
    }
}

/// Nondeterministic automaton over the alphabet 2^AP.
#[derive(Clone, Debug)]
pub struct Nfa {
    pub num_atoms: usize,
    pub initial: Vec<usize>,
    pub accepting: Vec<bool>,
    /// `transitions[state][letter]` lists successor states.
    pub transitions: Vec<Vec<Vec<usize>>>,
}

impl Nfa {
    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn alphabet_size(&self) -> usize {
        1 << self.num_atoms
    }

    /// Build the obligation NFA of a core formula over `num_atoms` atoms.
    pub fn from_formula(f: &Formula, num_atoms: usize, state_cap: usize) -> Result<Nfa> {
        if num_atoms > MAX_ATOMS {
            return Err(Error::ResourceCap { what: "atomic propositions", limit: MAX_ATOMS });
        }
        if let Some(m) = f.max_atom() {
            if m >= num_atoms {
                return Err(Error::arg(format!("formula references atom {m} beyond the {num_atoms}-atom alphabet")));
            }
        }
        let mut arena = Arena::default();
        let root = arena.intern(f)?;
        let sigma = 1usize << num_atoms;
        let mut builder = Builder { arena, memo: HashMap::new() };

        let mut ids: HashMap<Clause, usize> = HashMap::new();
        let mut clauses: Vec<Clause> = Vec::new();
        let start = builder.arena.singleton(root);
        ids.insert(start.clone(), 0);
        clauses.push(start);
        let mut transitions = Vec::new();
        let mut next = 0;
        while next < clauses.len() {
            let clause = clauses[next].clone();
            next += 1;
            let mut row = Vec::with_capacity(sigma);
            for l in 0..sigma {
                let succ = builder.step(&clause, Letter(l as u32));
                let mut targets = Vec::with_capacity(succ.len());
                for c in succ {
                    let id = match ids.get(&c) {
                        Some(&id) => id,
                        None => {
                            if clauses.len() >= state_cap {
                                return Err(Error::ResourceCap { what: "NFA states", limit: state_cap });
                            }
                            let id = clauses.len();
                            ids.insert(c.clone(), id);
                            clauses.push(c);
                            id
                        }
                    };
                    targets.push(id);
                }
                targets.sort_unstable();
                row.push(targets);
            }
            transitions.push(row);
        }
        let accepting = clauses.iter().map(|c| c.is_empty()).collect();
        Ok(Nfa { num_atoms, initial: vec![0], accepting, transitions })
    }
}

struct Builder {
    arena: Arena,
    memo: HashMap<(u32, u32), Vec<Clause>>,
}

impl Builder {
    fn step(&mut self, clause: &Clause, letter: Letter) -> Vec<Clause> {
        let mut acc: Vec<Clause> = vec![Vec::new()];
        for &id in clause {
            let e = self.expand(id, letter);
            acc = product(&acc, &e);
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    /// One-step unfolding of obligation `id` under `letter`, as a DNF over
    /// next-step obligations.
    fn expand(&mut self, id: u32, letter: Letter) -> Vec<Clause> {
        if let Some(v) = self.memo.get(&(id, letter.0)) {
            return v.clone();
        }
        let out = match self.arena.nodes[id as usize].clone() {
            Node::True => vec![Vec::new()],
            Node::Atom(i) => {
                if letter.contains(i) {
                    vec![Vec::new()]
                } else {
                    Vec::new()
                }
            }
            Node::NegAtom(i) => {
                if letter.contains(i) {
                    Vec::new()
                } else {
                    vec![Vec::new()]
                }
            }
            Node::And(a, b) => {
                let ea = self.expand(a, letter);
                let eb = self.expand(b, letter);
                product(&ea, &eb)
            }
            Node::Or(a, b) => {
                let mut v = self.expand(a, letter);
                v.extend(self.expand(b, letter));
                normalize(v)
            }
            Node::Next(a) => vec![self.arena.singleton(a)],
            Node::Until(a, b) => {
                let mut v = self.expand(b, letter);
                let ea = self.expand(a, letter);
                v.extend(product(&ea, &[vec![id]]));
                normalize(v)
            }
            Node::Eventually(a) => {
                let mut v = self.expand(a, letter);
                v.push(vec![id]);
                normalize(v)
            }
        };
        self.memo.insert((id, letter.0), out.clone());
        out
    }
}

fn product(xs: &[Clause], ys: &[Clause]) -> Vec<Clause> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            let mut c: Clause = x.iter().chain(y.iter()).copied().collect();
            c.sort_unstable();
            c.dedup();
            out.push(c);
        }
    }
    normalize(out)
}

/// Deduplicate and drop clauses subsumed by a smaller one.
fn normalize(mut v: Vec<Clause>) -> Vec<Clause> {
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v.dedup();
    let mut kept: Vec<Clause> = Vec::with_capacity(v.len());
    for c in v {
        if !kept.iter().any(|k| is_subset(k, &c)) {
            kept.push(c);
        }
    }
    kept
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut j = 0;
    for &s in small {
        while j < big.len() && big[j] < s {
            j += 1;
        }
        if j == big.len() || big[j] != s {
            return false;
        }
        j += 1;
    }
    true
}
