//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::PathBuf;

use robsynth::abstraction::{build_grid, FiniteAbstraction};
use robsynth::linalg::Mat;
use robsynth::logic::{Dfa, Letter};
use robsynth::mdp::FiniteMdp;
use robsynth::model::Rect;
use robsynth::rng::StreamRng;

pub type Dense = Vec<Vec<Vec<f64>>>;

pub fn toy_config_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/toy/pipeline.json")
}

// ---------------------------------------------------------------- MDPs

/// Random probability vector with roughly a third of the entries zeroed.
pub fn random_distribution(rng: &mut StreamRng, n: usize) -> Vec<f64> {
    let mut p: Vec<f64> = (0..n).map(|_| if rng.uniform() < 0.33 { 0.0 } else { rng.uniform() }).collect();
    if p.iter().all(|&x| x == 0.0) {
        p[rng.below(n)] = 1.0;
    }
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    p
}

pub fn random_dense(rng: &mut StreamRng, n: usize, m: usize) -> Dense {
    (0..n).map(|_| (0..m).map(|_| random_distribution(rng, n)).collect()).collect()
}

pub fn mdp_of(t: &Dense) -> FiniteMdp {
    FiniteMdp::from_dense(t).expect("stochastic rows")
}

/// Move mass `t ≤ δ` of every row from some entries to others, so each row
/// stays within total variation δ of the original.
pub fn tv_perturb(rng: &mut StreamRng, t: &Dense, delta: f64) -> Dense {
    t.iter()
        .map(|rows| {
            rows.iter()
                .map(|p| {
                    let n = p.len();
                    let budget = delta * rng.uniform();
                    let take_w: Vec<f64> = p.iter().map(|&x| x * rng.uniform()).collect();
                    let tw: f64 = take_w.iter().sum();
                    if tw == 0.0 {
                        return p.clone();
                    }
                    let scale = (budget / tw).min(1.0);
                    let removed: Vec<f64> = take_w.iter().zip(p).map(|(w, x)| (w * scale).min(*x)).collect();
                    let total: f64 = removed.iter().sum();
                    let give: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
                    let gs: f64 = give.iter().sum();
                    let mut q: Vec<f64> = (0..n).map(|i| p[i] - removed[i] + total * give[i] / gs).collect();
                    let s: f64 = q.iter().sum();
                    q.iter_mut().for_each(|x| *x /= s);
                    q
                })
                .collect()
        })
        .collect()
}

pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Probability of visiting `target` within `horizon` steps under a
/// time-varying Markov policy `pol[k][x]`, for every start state.
pub fn policy_reach_value(t: &Dense, target: &[bool], pol: &[Vec<usize>], horizon: usize) -> Vec<f64> {
    let n = t.len();
    let mut h: Vec<f64> = target.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    for k in (0..horizon).rev() {
        h = (0..n)
            .map(|x| if target[x] { 1.0 } else { (0..n).map(|y| t[x][pol[k][x]][y] * h[y]).sum() })
            .collect();
    }
    h
}

/// Maximal reachability by enumerating every time-varying deterministic
/// Markov policy; choices at target states are irrelevant and fixed.
pub fn enumerate_reach_optimum(t: &Dense, target: &[bool], horizon: usize) -> Vec<f64> {
    let n = t.len();
    let m = t[0].len();
    let free: Vec<(usize, usize)> = (0..horizon).flat_map(|k| (0..n).filter(|&x| !target[x]).map(move |x| (k, x))).collect();
    let mut digits = vec![0usize; free.len()];
    let mut pol = vec![vec![0usize; n]; horizon];
    let mut best = vec![f64::NEG_INFINITY; n];
    loop {
        for (d, &(k, x)) in digits.iter().zip(&free) {
            pol[k][x] = *d;
        }
        for (b, v) in best.iter_mut().zip(policy_reach_value(t, target, &pol, horizon)) {
            *b = b.max(v);
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return best;
            }
            digits[i] += 1;
            if digits[i] < m {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

pub fn enumeration_size(n_free: usize, m: usize, horizon: usize) -> f64 {
    (m as f64).powi((n_free * horizon) as i32)
}

/// Straight-line robust recursion: `V_N = 0`,
/// `V_k(x) = L(max_j Σ_y p(y|x,j) w_{k+1}(y) + shift)` with `w = 1` on the
/// target, and the bound at `x` is `L(w_0(x) + shift)`.
pub fn robust_reach_oracle(t: &Dense, target: &[bool], horizon: usize, shift: f64) -> Vec<f64> {
    let n = t.len();
    let clamp = |v: f64| v.max(0.0).min(1.0);
    let mut v = vec![0.0; n];
    for _ in 0..horizon {
        let w: Vec<f64> = (0..n).map(|y| if target[y] { 1.0 } else { v[y] }).collect();
        let mut next = vec![0.0; n];
        for x in 0..n {
            let mut best = f64::NEG_INFINITY;
            for row in &t[x] {
                let s: f64 = row.iter().zip(&w).map(|(p, w)| p * w).sum();
                if s > best {
                    best = s;
                }
            }
            next[x] = clamp(best + shift);
        }
        v = next;
    }
    (0..n).map(|x| clamp(if target[x] { 1.0 } else { v[x] } + shift)).collect()
}

/// One-dimensional abstraction with unit cells on `[0, cells]`, output
/// `y = c·z`, and an absorbing sink appended to a random MDP.
pub fn random_line_abstraction(rng: &mut StreamRng, cells: usize, inputs: usize, c: f64) -> (FiniteAbstraction, Dense) {
    let grid = build_grid(&Rect::from_bounds(&[[0.0, cells as f64]]).unwrap(), &[cells]).unwrap();
    let mut t = random_dense(rng, cells + 1, inputs);
    for j in 0..inputs {
        t[cells][j] = (0..=cells).map(|y| if y == cells { 1.0 } else { 0.0 }).collect();
    }
    let abs = FiniteAbstraction {
        grid,
        inputs: (0..inputs).map(|j| vec![j as f64]).collect(),
        c1: Mat::from_element(1, 1, c),
        mdp: mdp_of(&t),
    };
    (abs, t)
}

// ---------------------------------------------------------------- scLTL

/// Surface syntax used for enumeration and rendering.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Syn {
    True,
    Lit(u8, bool),
    And(Box<Syn>, Box<Syn>),
    Or(Box<Syn>, Box<Syn>),
    Until(Box<Syn>, Box<Syn>),
    Next(Box<Syn>),
    Ev(Box<Syn>),
}

pub const ATOM_NAMES: [&str; 2] = ["a", "b"];

impl Syn {
    pub fn render(&self) -> String {
        match self {
            Syn::True => "true".into(),
            Syn::Lit(i, true) => ATOM_NAMES[*i as usize].into(),
            Syn::Lit(i, false) => format!("!{}", ATOM_NAMES[*i as usize]),
            Syn::And(a, b) => format!("({} & {})", a.render(), b.render()),
            Syn::Or(a, b) => format!("({} | {})", a.render(), b.render()),
            Syn::Until(a, b) => format!("({} U {})", a.render(), b.render()),
            Syn::Next(a) => format!("X {}", a.render()),
            Syn::Ev(a) => format!("F {}", a.render()),
        }
    }

    pub fn to_ltl(&self) -> Ltl {
        match self {
            Syn::True => Ltl::True,
            Syn::Lit(i, p) => Ltl::Lit(*i, *p),
            Syn::And(a, b) => Ltl::and(vec![a.to_ltl(), b.to_ltl()]),
            Syn::Or(a, b) => Ltl::or(vec![a.to_ltl(), b.to_ltl()]),
            Syn::Until(a, b) => Ltl::Until(Box::new(a.to_ltl()), Box::new(b.to_ltl())),
            Syn::Next(a) => Ltl::Next(Box::new(a.to_ltl())),
            Syn::Ev(a) => Ltl::Ev(Box::new(a.to_ltl())),
        }
    }
}

/// Every formula over two atoms with exactly `size` nodes (a negated atom is one node).
pub fn formulas_of_size(size: usize, memo: &mut HashMap<usize, Vec<Syn>>) -> Vec<Syn> {
    if let Some(v) = memo.get(&size) {
        return v.clone();
    }
    let mut out = Vec::new();
    if size == 1 {
        out.push(Syn::True);
        for i in 0..2 {
            out.push(Syn::Lit(i, true));
            out.push(Syn::Lit(i, false));
        }
    } else {
        for a in formulas_of_size(size - 1, memo) {
            out.push(Syn::Next(Box::new(a.clone())));
            out.push(Syn::Ev(Box::new(a)));
        }
        for l in 1..size - 1 {
            let left = formulas_of_size(l, memo);
            let right = formulas_of_size(size - 1 - l, memo);
            for a in &left {
                for b in &right {
                    out.push(Syn::And(Box::new(a.clone()), Box::new(b.clone())));
                    out.push(Syn::Or(Box::new(a.clone()), Box::new(b.clone())));
                    out.push(Syn::Until(Box::new(a.clone()), Box::new(b.clone())));
                }
            }
        }
    }
    memo.insert(size, out.clone());
    out
}

/// Formula in a canonical form for progression: conjunctions and
/// disjunctions are flattened, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl {
    False,
    True,
    Lit(u8, bool),
    And(Vec<Ltl>),
    Or(Vec<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Ev(Box<Ltl>),
}

impl Ltl {
    pub fn and(parts: Vec<Ltl>) -> Ltl {
        let mut set = BTreeSet::new();
        for p in parts {
            match p {
                Ltl::True => {}
                Ltl::False => return Ltl::False,
                Ltl::And(v) => set.extend(v),
                other => {
                    set.insert(other);
                }
            }
        }
        match set.len() {
            0 => Ltl::True,
            1 => set.into_iter().next().unwrap(),
            _ => Ltl::And(set.into_iter().collect()),
        }
    }

    pub fn or(parts: Vec<Ltl>) -> Ltl {
        let mut set = BTreeSet::new();
        for p in parts {
            match p {
                Ltl::False => {}
                Ltl::True => return Ltl::True,
                Ltl::Or(v) => set.extend(v),
                other => {
                    set.insert(other);
                }
            }
        }
        match set.len() {
            0 => Ltl::False,
            1 => set.into_iter().next().unwrap(),
            _ => Ltl::Or(set.into_iter().collect()),
        }
    }

    /// Obligation left for the suffix after reading `letter`.
    pub fn progress(&self, letter: u32) -> Ltl {
        match self {
            Ltl::True => Ltl::True,
            Ltl::False => Ltl::False,
            Ltl::Lit(i, pos) => {
                if (letter >> i & 1 == 1) == *pos {
                    Ltl::True
                } else {
                    Ltl::False
                }
            }
            Ltl::And(v) => Ltl::and(v.iter().map(|f| f.progress(letter)).collect()),
            Ltl::Or(v) => Ltl::or(v.iter().map(|f| f.progress(letter)).collect()),
            Ltl::Next(f) => (**f).clone(),
            Ltl::Until(a, b) => Ltl::or(vec![b.progress(letter), Ltl::and(vec![a.progress(letter), self.clone()])]),
            Ltl::Ev(a) => Ltl::or(vec![a.progress(letter), self.clone()]),
        }
    }

    /// Satisfied by the word read so far with nothing after it.
    pub fn holds_at_end(&self) -> bool {
        match self {
            Ltl::True => true,
            Ltl::And(v) => v.iter().all(Ltl::holds_at_end),
            Ltl::Or(v) => v.iter().any(Ltl::holds_at_end),
            _ => false,
        }
    }
}

/// Direct finite-word semantics where unmet future obligations fail.
pub fn finite_holds(f: &Syn, w: &[u32], i: usize) -> bool {
    match f {
        Syn::True => true,
        Syn::Lit(a, pos) => i < w.len() && ((w[i] >> a & 1 == 1) == *pos),
        Syn::And(a, b) => finite_holds(a, w, i) && finite_holds(b, w, i),
        Syn::Or(a, b) => finite_holds(a, w, i) || finite_holds(b, w, i),
        Syn::Next(a) => i < w.len() && finite_holds(a, w, i + 1),
        Syn::Until(a, b) => (i..w.len()).any(|j| finite_holds(b, w, j) && (i..j).all(|k| finite_holds(a, w, k))),
        Syn::Ev(a) => (i..w.len()).any(|j| finite_holds(a, w, j)),
    }
}

/// Residual obligation in disjunctive normal form over literals and temporal
/// subformulas, kept as an antichain (no clause contains another).
pub type Dnf = BTreeSet<BTreeSet<Ltl>>;

fn minimize(d: Dnf) -> Dnf {
    let clauses: Vec<BTreeSet<Ltl>> = d.into_iter().collect();
    clauses
        .iter()
        .filter(|c| !clauses.iter().any(|o| o != *c && o.is_subset(c)))
        .cloned()
        .collect()
}

pub fn dnf(f: &Ltl) -> Dnf {
    match f {
        Ltl::True => BTreeSet::from([BTreeSet::new()]),
        Ltl::False => BTreeSet::new(),
        Ltl::Or(v) => minimize(v.iter().flat_map(dnf).collect()),
        Ltl::And(v) => {
            let mut acc: Dnf = BTreeSet::from([BTreeSet::new()]);
            for g in v {
                let dg = dnf(g);
                acc = acc.iter().flat_map(|c| dg.iter().map(move |d| c.union(d).cloned().collect())).collect();
                acc = minimize(acc);
            }
            acc
        }
        other => BTreeSet::from([BTreeSet::from([other.clone()])]),
    }
}

pub fn progress_dnf(d: &Dnf, letter: u32) -> Dnf {
    let clauses = d.iter().map(|c| Ltl::and(c.iter().map(|e| e.progress(letter)).collect()));
    dnf(&Ltl::or(clauses.collect()))
}

/// Progression automaton with exact good-prefix marking: a residual is good
/// iff it holds at the end (has an empty clause) or, in the least fixed
/// point, all its successors are good. Letters are bitmasks over `atoms` atoms.
pub struct GoodPrefixOracle {
    pub states: Vec<Dnf>,
    pub next: Vec<Vec<usize>>,
    pub good: Vec<bool>,
}

impl GoodPrefixOracle {
    pub fn new(f: Ltl, atoms: usize) -> Self {
        let sigma = 1usize << atoms;
        let start = dnf(&f);
        let mut index: HashMap<Dnf, usize> = HashMap::new();
        let mut states = vec![start.clone()];
        index.insert(start, 0);
        let mut next: Vec<Vec<usize>> = Vec::new();
        let mut s = 0;
        while s < states.len() {
            let mut row = Vec::with_capacity(sigma);
            for l in 0..sigma {
                let p = progress_dnf(&states[s], l as u32);
                let id = *index.entry(p.clone()).or_insert_with(|| {
                    states.push(p);
                    states.len() - 1
                });
                row.push(id);
            }
            next.push(row);
            s += 1;
        }
        let mut good: Vec<bool> = states.iter().map(|d| d.contains(&BTreeSet::new())).collect();
        loop {
            let mut changed = false;
            for s in 0..states.len() {
                if !good[s] && next[s].iter().all(|&t| good[t]) {
                    good[s] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        GoodPrefixOracle { states, next, good }
    }
}

/// Compare DFA acceptance with the oracle on every word up to `max_len`;
/// returns the first disagreeing word.
pub fn compare_on_words(dfa: &Dfa, oracle: &GoodPrefixOracle, max_len: usize) -> Option<Vec<u32>> {
    let sigma = dfa.alphabet_size();
    let mut seen: HashSet<(usize, usize, usize)> = HashSet::new();
    let mut word = Vec::new();
    fn walk(
        dfa: &Dfa,
        o: &GoodPrefixOracle,
        q: usize,
        s: usize,
        word: &mut Vec<u32>,
        max_len: usize,
        sigma: usize,
        seen: &mut HashSet<(usize, usize, usize)>,
    ) -> Option<Vec<u32>> {
        if !seen.insert((q, s, word.len())) {
            return None;
        }
        if dfa.is_accepting(q) != o.good[s] {
            return Some(word.clone());
        }
        if word.len() == max_len {
            return None;
        }
        for l in 0..sigma {
            word.push(l as u32);
            let r = walk(dfa, o, dfa.step_unchecked(q, Letter(l as u32)), o.next[s][l], word, max_len, sigma, seen);
            word.pop();
            if r.is_some() {
                return r;
            }
        }
        None
    }
    walk(dfa, oracle, dfa.initial(), 0, &mut word, max_len, sigma, &mut seen)
}

// ---------------------------------------------------------------- numerics

/// Maclaurin series of erf, adequate for |x| ≤ 4.
pub fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= -x * x / n;
        let add = term / (2.0 * n + 1.0);
        sum += add;
        if add.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

/// Γ(d/2 + 1) for integer d.
fn gamma_half_plus_one(d: usize) -> f64 {
    if d % 2 == 0 {
        (1..=d / 2).map(|k| k as f64).product()
    } else {
        let mut g = std::f64::consts::PI.sqrt() / 2.0;
        let mut a = 1.5;
        while a < d as f64 / 2.0 + 1.0 - 1e-9 {
            g *= a;
            a += 1.0;
        }
        g
    }
}

/// Closed-form chi-square CDF via `F_{d+2} = F_d − (c/2)^{d/2} e^{−c/2} / Γ(d/2+1)`.
pub fn chi2_cdf_closed(d: usize, c: f64) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    let (mut f, mut k) = if d % 2 == 1 { (erf_series((c / 2.0).sqrt()), 1) } else { (1.0 - (-c / 2.0).exp(), 2) };
    while k < d {
        f -= (c / 2.0).powf(k as f64 / 2.0) * (-c / 2.0).exp() / gamma_half_plus_one(k);
        k += 2;
    }
    f
}

/// Bisection for `F(c) = 1 − δ` on the closed-form CDF.
pub fn chi2_quantile_bisect(d: usize, delta: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 200.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if chi2_cdf_closed(d, mid) < 1.0 - delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Adaptive Simpson quadrature.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64, m: f64, fm: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) + rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    if b <= a {
        return 0.0;
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    rec(f, a, fa, b, fb, m, fm, whole, tol, 60)
}

/// Gaussian mass of `[lo, hi]` by quadrature of the density, clipped to ±40σ.
pub fn gaussian_mass_quadrature(mu: f64, sigma: f64, lo: f64, hi: f64) -> f64 {
    let a = lo.max(mu - 40.0 * sigma);
    let b = hi.min(mu + 40.0 * sigma);
    if b <= a {
        return 0.0;
    }
    let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let pdf = move |x: f64| norm * (-0.5 * ((x - mu) / sigma).powi(2)).exp();
    // split at the mode so the quadrature sees the peak
    if a < mu && mu < b {
        adaptive_simpson(&pdf, a, mu, 1e-14) + adaptive_simpson(&pdf, mu, b, 1e-14)
    } else {
        adaptive_simpson(&pdf, a, b, 1e-14)
    }
}

/// Random matrix with entries uniform in `[-1, 1]`.
pub fn random_matrix(rng: &mut StreamRng, r: usize, c: usize) -> Mat {
    Mat::from_fn(r, c, |_, _| rng.uniform_in(-1.0, 1.0))
}

/// `min_t sqrt(‖Σ G_i G_iᵀ / t_i‖ · Σ t_i r_i²)`, an upper bound on
/// `‖Σ G_i z_i‖` over `‖z_i‖ ≤ r_i` by weighted Cauchy–Schwarz.
fn weighted_cs_bound(gs: &[Mat], radii_sq: &[f64]) -> f64 {
    let k = gs.len();
    let active: Vec<bool> = (0..k).map(|i| radii_sq[i] > 0.0 && gs[i].norm() > 0.0).collect();
    let eval = |t: &[f64]| {
        let mut s = Mat::zeros(gs[0].nrows(), gs[0].nrows());
        let mut q = 0.0;
        for i in (0..k).filter(|&i| active[i]) {
            s += &gs[i] * gs[i].transpose() / t[i];
            q += t[i] * radii_sq[i];
        }
        (robsynth::linalg::spectral_norm(&s) * q).sqrt()
    };
    let mut t: Vec<f64> = (0..k)
        .map(|i| if active[i] { robsynth::linalg::spectral_norm(&gs[i]) / radii_sq[i].sqrt() } else { 1.0 })
        .collect();
    let mut best = eval(&t);
    let mut step = 2.0f64;
    while step > 1.0 + 1e-9 {
        let mut improved = false;
        for i in (0..k).filter(|&i| active[i]) {
            for f in [step, 1.0 / step] {
                let mut t2 = t.clone();
                t2[i] *= f;
                let v = eval(&t2);
                if v < best {
                    best = v;
                    t = t2;
                    improved = true;
                }
            }
        }
        if !improved {
            step = step.sqrt();
        }
    }
    best
}

/// Rigorous upper bound on the one-step error norm `‖M^{1/2}(Āx̄ + B̄u + B̄_w w − Pβ)‖`
/// over the admissible set at relation size `eps`: the maximum over β is at a
/// box vertex, and each vertex is bounded by weighted Cauchy–Schwarz.
pub fn one_step_upper_bound(c: &robsynth::relation::SimulationCertificate, eps: f64) -> f64 {
    use robsynth::linalg::{sym_inv_sqrt, sym_sqrt, Vector};
    let ms = sym_sqrt(&c.m).unwrap();
    let msi = sym_inv_sqrt(&c.m).unwrap();
    let gx = &ms * &c.a_bar * &msi * eps;
    let gu = &ms * &c.b_bar;
    let gw = &ms * &c.bw_bar;
    let gb = &ms * &c.p;
    let nb = c.widths.len();
    (0..1usize << nb)
        .map(|mask| {
            let beta = Vector::from_iterator(nb, (0..nb).map(|i| if mask >> i & 1 == 1 { c.widths[i] } else { -c.widths[i] }));
            let v = -(&gb * beta);
            let gs = [gx.clone(), gu.clone(), gw.clone(), Mat::from_column_slice(v.len(), 1, v.as_slice())];
            weighted_cs_bound(&gs, &[1.0, c.c_u, c.c_w, 1.0])
        })
        .fold(0.0, f64::max)
}
