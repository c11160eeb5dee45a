use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::formula::Formula;
use super::letter::{Letter, MAX_ATOMS};
use super::nfa::Nfa;
use crate::error::{Error, Result};

/// Default cap on determinized states.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// Total deterministic automaton over 2^AP with absorbing accepting locations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    atoms: Vec<String>,
    initial: usize,
    accepting: Vec<bool>,
    /// Row-major `location * alphabet_size + letter`.
    table: Vec<u32>,
}

impl Dfa {
    /// Assemble from raw parts, checking totality and index ranges.
    pub fn from_parts(atoms: Vec<String>, initial: usize, accepting: Vec<bool>, table: Vec<u32>) -> Result<Dfa> {
        if atoms.len() > MAX_ATOMS {
            return Err(Error::ResourceCap { what: "atomic propositions", limit: MAX_ATOMS });
        }
        let n = accepting.len();
        let sigma = 1usize << atoms.len();
        if n == 0 || initial >= n {
            return Err(Error::arg("DFA needs at least one location and a valid initial location"));
        }
        if table.len() != n * sigma {
            return Err(Error::arg(format!("transition table has {} entries, expected {}", table.len(), n * sigma)));
        }
        if table.iter().any(|&t| t as usize >= n) {
            return Err(Error::arg("transition target out of range"));
        }
        Ok(Dfa { atoms, initial, accepting, table })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn num_locations(&self) -> usize {
        self.accepting.len()
    }

    pub fn alphabet_size(&self) -> usize {
        1 << self.atoms.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_locations(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_locations()).filter(|&q| self.accepting[q])
    }

    /// `t(q, letter)`.
    pub fn step(&self, q: usize, letter: Letter) -> Result<usize> {
        if letter.0 as usize >= self.alphabet_size() {
            return Err(Error::LetterOutOfAlphabet(letter.0));
        }
        if q >= self.num_locations() {
            return Err(Error::arg(format!("location {q} out of range")));
        }
        Ok(self.step_unchecked(q, letter))
    }

    #[inline]
    pub fn step_unchecked(&self, q: usize, letter: Letter) -> usize {
        self.table[q * self.alphabet_size() + letter.0 as usize] as usize
    }

    /// True iff the run on `word` visits an accepting location (the initial
    /// location included).
    pub fn accepts(&self, word: &[Letter]) -> Result<bool> {
        let mut q = self.initial;
        if self.accepting[q] {
            return Ok(true);
        }
        for &l in word {
            q = self.step(q, l)?;
            if self.accepting[q] {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Locations from which some accepting location is reachable.
    pub fn live_locations(&self) -> Vec<bool> {
        let n = self.num_locations();
        let sigma = self.alphabet_size();
        let mut preds = vec![Vec::new(); n];
        for q in 0..n {
            for l in 0..sigma {
                preds[self.table[q * sigma + l] as usize].push(q);
            }
        }
        let mut live = self.accepting.clone();
        let mut queue: VecDeque<usize> = (0..n).filter(|&q| live[q]).collect();
        while let Some(t) = queue.pop_front() {
            for &p in &preds[t] {
                if !live[p] {
                    live[p] = true;
                    queue.push_back(p);
                }
            }
        }
        live
    }

    /// Subset construction. Locations are marked accepting when every infinite
    /// continuation eventually discharges all obligations (the residual is
    /// valid), and accepting locations are then made absorbing.
    pub fn determinize(nfa: &Nfa, atoms: Vec<String>, state_cap: usize) -> Result<Dfa> {
        if atoms.len() != nfa.num_atoms {
            return Err(Error::arg("atom list does not match the NFA alphabet"));
        }
        let sigma = nfa.alphabet_size();
        let mut ids: HashMap<Vec<usize>, u32> = HashMap::new();
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        let mut table: Vec<u32> = Vec::new();
        let mut start = nfa.initial.clone();
        start.sort_unstable();
        start.dedup();
        ids.insert(start.clone(), 0);
        subsets.push(start);
        let mut next = 0;
        let mut scratch = Vec::new();
        while next < subsets.len() {
            let cur = subsets[next].clone();
            next += 1;
            for l in 0..sigma {
                scratch.clear();
                for &s in &cur {
                    scratch.extend_from_slice(&nfa.transitions[s][l]);
                }
                scratch.sort_unstable();
                scratch.dedup();
                let id = match ids.get(&scratch) {
                    Some(&id) => id,
                    None => {
                        if subsets.len() >= state_cap {
                            return Err(Error::ResourceCap { what: "determinized states", limit: state_cap });
                        }
                        let id = subsets.len() as u32;
                        ids.insert(scratch.clone(), id);
                        subsets.push(scratch.clone());
                        id
                    }
                };
                table.push(id);
            }
        }
        let n = subsets.len();
        let informative: Vec<bool> = subsets.iter().map(|s| s.iter().any(|&q| nfa.accepting[q])).collect();

        // Greatest fixpoint: locations with an infinite path avoiding informative acceptance.
        let mut avoid: Vec<bool> = informative.iter().map(|&a| !a).collect();
        loop {
            let mut changed = false;
            for q in 0..n {
                if avoid[q] && !(0..sigma).any(|l| avoid[table[q * sigma + l] as usize]) {
                    avoid[q] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let accepting: Vec<bool> = avoid.iter().map(|&a| !a).collect();
        for q in 0..n {
            if accepting[q] {
                for l in 0..sigma {
                    table[q * sigma + l] = q as u32;
                }
            }
        }
        Dfa::from_parts(atoms, 0, accepting, table)
    }

    /// Hopcroft partition refinement over the reachable part. Locations of
    /// the result are numbered in breadth-first order from the initial one.
    pub fn minimize(&self) -> Dfa {
        let sigma = self.alphabet_size();
        // restrict to reachable locations
        let mut reach_id = vec![usize::MAX; self.num_locations()];
        let mut order = vec![self.initial];
        reach_id[self.initial] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for l in 0..sigma {
                let t = self.table[q * sigma + l] as usize;
                if reach_id[t] == usize::MAX {
                    reach_id[t] = order.len();
                    order.push(t);
                }
            }
        }
        let n = order.len();
        let delta: Vec<usize> = order
            .iter()
            .flat_map(|&q| (0..sigma).map(move |l| (q, l)))
            .map(|(q, l)| reach_id[self.table[q * sigma + l] as usize])
            .collect();
        let acc: Vec<bool> = order.iter().map(|&q| self.accepting[q]).collect();

        // inverse transitions: inv[l][t] = predecessors of t on l
        let mut inv: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; sigma];
        for q in 0..n {
            for l in 0..sigma {
                inv[l][delta[q * sigma + l]].push(q);
            }
        }

        let mut block_of = vec![0usize; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let fin: Vec<usize> = (0..n).filter(|&q| acc[q]).collect();
        let nonfin: Vec<usize> = (0..n).filter(|&q| !acc[q]).collect();
        for part in [fin, nonfin] {
            if !part.is_empty() {
                let b = blocks.len();
                for &q in &part {
                    block_of[q] = b;
                }
                blocks.push(part);
            }
        }
        let mut pending: HashSet<(usize, usize)> = HashSet::new();
        let mut work: Vec<(usize, usize)> = Vec::new();
        if blocks.len() == 2 {
            let small = if blocks[0].len() <= blocks[1].len() { 0 } else { 1 };
            for l in 0..sigma {
                work.push((small, l));
                pending.insert((small, l));
            }
        }
        let mut marked = vec![false; n];
        let mut touched_count: Vec<usize> = Vec::new();
        while let Some((b, l)) = work.pop() {
            pending.remove(&(b, l));
            let mut xs: Vec<usize> = Vec::new();
            for &t in &blocks[b] {
                for &p in &inv[l][t] {
                    if !marked[p] {
                        marked[p] = true;
                        xs.push(p);
                    }
                }
            }
            touched_count.clear();
            touched_count.resize(blocks.len(), 0);
            let mut touched: Vec<usize> = Vec::new();
            for &p in &xs {
                let y = block_of[p];
                if touched_count[y] == 0 {
                    touched.push(y);
                }
                touched_count[y] += 1;
            }
            for y in touched {
                if touched_count[y] == blocks[y].len() {
                    continue;
                }
                let (inside, outside): (Vec<usize>, Vec<usize>) = blocks[y].iter().partition(|&&q| marked[q]);
                let nb = blocks.len();
                for &q in &inside {
                    block_of[q] = nb;
                }
                blocks[y] = outside;
                blocks.push(inside);
                for d in 0..sigma {
                    if pending.contains(&(y, d)) {
                        pending.insert((nb, d));
                        work.push((nb, d));
                    } else {
                        let pick = if blocks[nb].len() <= blocks[y].len() { nb } else { y };
                        pending.insert((pick, d));
                        work.push((pick, d));
                    }
                }
            }
            for &p in &xs {
                marked[p] = false;
            }
        }

        // canonical BFS renumbering of blocks
        let mut new_id = vec![usize::MAX; blocks.len()];
        let mut reps: Vec<usize> = Vec::new();
        let start = block_of[0];
        new_id[start] = 0;
        reps.push(blocks[start][0]);
        let mut i = 0;
        while i < reps.len() {
            let q = reps[i];
            i += 1;
            for l in 0..sigma {
                let b = block_of[delta[q * sigma + l]];
                if new_id[b] == usize::MAX {
                    new_id[b] = reps.len();
                    reps.push(blocks[b][0]);
                }
            }
        }
        let table: Vec<u32> = reps
            .iter()
            .flat_map(|&q| (0..sigma).map(move |l| (q, l)))
            .map(|(q, l)| new_id[block_of[delta[q * sigma + l]]] as u32)
            .collect();
        let accepting = reps.iter().map(|&q| acc[q]).collect();
        Dfa { atoms: self.atoms.clone(), initial: 0, accepting, table }
    }

    pub fn to_file(&self) -> DfaFile {
        let sigma = self.alphabet_size();
        let mut transitions = Vec::with_capacity(self.num_locations() * sigma);
        for q in 0..self.num_locations() {
            for l in 0..sigma {
                transitions.push((q, Letter(l as u32).names(&self.atoms), self.table[q * sigma + l] as usize));
            }
        }
        DfaFile {
            atoms: self.atoms.clone(),
            locations: self.num_locations(),
            initial: self.initial,
            accepting: self.accepting_locations().collect(),
            transitions,
        }
    }

    pub fn from_file(file: &DfaFile) -> Result<Dfa> {
        let n = file.locations;
        let sigma = 1usize
            .checked_shl(file.atoms.len() as u32)
            .filter(|_| file.atoms.len() <= MAX_ATOMS)
            .ok_or(Error::ResourceCap { what: "atomic propositions", limit: MAX_ATOMS })?;
        let mut table = vec![u32::MAX; n * sigma];
        for (q, names, t) in &file.transitions {
            let letter = Letter::from_names(names, &file.atoms)
                .ok_or_else(|| Error::arg(format!("transition letter {names:?} uses unknown atoms")))?;
            if *q >= n || *t >= n {
                return Err(Error::arg("transition location out of range"));
            }
            table[q * sigma + letter.0 as usize] = *t as u32;
        }
        if table.iter().any(|&t| t == u32::MAX) {
            return Err(Error::arg("transition function is not total"));
        }
        let mut accepting = vec![false; n];
        for &q in &file.accepting {
            *accepting
                .get_mut(q)
                .ok_or_else(|| Error::arg("accepting location out of range"))? = true;
        }
        Dfa::from_parts(file.atoms.clone(), file.initial, accepting, table)
    }
}

/// JSON interchange form; letters are atom-name lists in atom-list order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DfaFile {
    pub atoms: Vec<String>,
    pub locations: usize,
    pub initial: usize,
    pub accepting: Vec<usize>,
    pub transitions: Vec<(usize, Vec<String>, usize)>,
}

/// Compile a core formula into a minimal DFA accepting exactly its good prefixes.
pub fn compile_dfa(f: &Formula, atoms: &[String]) -> Result<Dfa> {
    compile_dfa_with_cap(f, atoms, DEFAULT_STATE_CAP)
}

pub fn compile_dfa_with_cap(f: &Formula, atoms: &[String], state_cap: usize) -> Result<Dfa> {
    if !f.is_core() {
        return Err(Error::arg("bounded operators must be expanded before compilation"));
    }
    let nfa = Nfa::from_formula(f, atoms.len(), state_cap)?;
    let dfa = Dfa::determinize(&nfa, atoms.to_vec(), state_cap)?;
    Ok(dfa.minimize())
}
