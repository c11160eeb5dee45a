use std::fmt::Write;

/// scLTL syntax tree. Negation only ever appears directly above an atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    Atom(usize),
    NegAtom(usize),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    /// `F<=n φ`, sugar for `φ | Xφ | ... | X^n φ`.
    BoundedEventually(u32, Box<Formula>),
    /// `G<=n φ`, sugar for `φ & Xφ & ... & X^n φ`.
    BoundedAlways(u32, Box<Formula>),
}

impl Formula {
    pub fn atom(i: usize) -> Self {
        Formula::Atom(i)
    }

    pub fn not_atom(i: usize) -> Self {
        Formula::NegAtom(i)
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn next(a: Formula) -> Self {
        Formula::Next(Box::new(a))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn eventually(a: Formula) -> Self {
        Formula::Eventually(Box::new(a))
    }

    pub fn bounded_eventually(n: u32, a: Formula) -> Self {
        Formula::BoundedEventually(n, Box::new(a))
    }

    pub fn bounded_always(n: u32, a: Formula) -> Self {
        Formula::BoundedAlways(n, Box::new(a))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::Atom(_) | Formula::NegAtom(_) => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) => 1 + a.size() + b.size(),
            Formula::Next(a)
            | Formula::Eventually(a)
            | Formula::BoundedEventually(_, a)
            | Formula::BoundedAlways(_, a) => 1 + a.size(),
        }
    }

    /// True when no bounded sugar nodes remain.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::True | Formula::Atom(_) | Formula::NegAtom(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) => a.is_core() && b.is_core(),
            Formula::Next(a) | Formula::Eventually(a) => a.is_core(),
            Formula::BoundedEventually(..) | Formula::BoundedAlways(..) => false,
        }
    }

    /// Largest atom index referenced, if any.
    pub fn max_atom(&self) -> Option<usize> {
        match self {
            Formula::True => None,
            Formula::Atom(i) | Formula::NegAtom(i) => Some(*i),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) => a.max_atom().max(b.max_atom()),
            Formula::Next(a)
            | Formula::Eventually(a)
            | Formula::BoundedEventually(_, a)
            | Formula::BoundedAlways(_, a) => a.max_atom(),
        }
    }

    /// Rewrite bounded operators into core syntax. The unrolled conjunction
    /// (disjunction) is right-nested: `φ & (Xφ & (XXφ & ...))`.
    pub fn expand_bounded(&self) -> Formula {
        match self {
            Formula::True | Formula::Atom(_) | Formula::NegAtom(_) => self.clone(),
            Formula::And(a, b) => Formula::and(a.expand_bounded(), b.expand_bounded()),
            Formula::Or(a, b) => Formula::or(a.expand_bounded(), b.expand_bounded()),
            Formula::Until(a, b) => Formula::until(a.expand_bounded(), b.expand_bounded()),
            Formula::Next(a) => Formula::next(a.expand_bounded()),
            Formula::Eventually(a) => Formula::eventually(a.expand_bounded()),
            Formula::BoundedAlways(n, a) => unroll(*n, a.expand_bounded(), Formula::and),
            Formula::BoundedEventually(n, a) => unroll(*n, a.expand_bounded(), Formula::or),
        }
    }

    /// Pretty-print with atom names, fully parenthesized for binary nodes.
    pub fn render(&self, atoms: &[String]) -> String {
        let mut s = String::new();
        self.render_into(atoms, &mut s);
        s
    }

    fn render_into(&self, atoms: &[String], out: &mut String) {
        let name = |i: usize| atoms.get(i).cloned().unwrap_or_else(|| format!("p{i}"));
        match self {
            Formula::True => out.push_str("true"),
            Formula::Atom(i) => out.push_str(&name(*i)),
            Formula::NegAtom(i) => {
                out.push('!');
                out.push_str(&name(*i));
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) => {
                let op = match self {
                    Formula::And(..) => "&",
                    Formula::Or(..) => "|",
                    _ => "U",
                };
                out.push('(');
                a.render_into(atoms, out);
                let _ = write!(out, " {op} ");
                b.render_into(atoms, out);
                out.push(')');
            }
            Formula::Next(a) => {
                out.push_str("X ");
                a.render_into(atoms, out);
            }
            Formula::Eventually(a) => {
                out.push_str("F ");
                a.render_into(atoms, out);
            }
            Formula::BoundedEventually(n, a) => {
                let _ = write!(out, "F<={n} ");
                a.render_into(atoms, out);
            }
            Formula::BoundedAlways(n, a) => {
                let _ = write!(out, "G<={n} ");
                a.render_into(atoms, out);
            }
        }
    }
}

fn unroll(n: u32, body: Formula, join: fn(Formula, Formula) -> Formula) -> Formula {
    let shifted = |k: u32| (0..k).fold(body.clone(), |f, _| Formula::next(f));
    let mut acc = shifted(n);
    for k in (0..n).rev() {
        acc = join(shifted(k), acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounded_always_zero_is_identity() {
        let a = Formula::atom(0);
        assert_eq!(Formula::bounded_always(0, a.clone()).expand_bounded(), a);
    }

    #[test]
    fn bounded_eventually_one_step() {
        let a = Formula::atom(0);
        let want = Formula::or(a.clone(), Formula::next(a.clone()));
        assert_eq!(Formula::bounded_eventually(1, a).expand_bounded(), want);
    }

    #[test]
    fn bounded_always_three_unrolls_four_instants() {
        let k = Formula::atom(0);
        let x = |f: Formula| Formula::next(f);
        let want = Formula::and(
            k.clone(),
            Formula::and(x(k.clone()), Formula::and(x(x(k.clone())), x(x(x(k.clone()))))),
        );
        let got = Formula::bounded_always(3, k).expand_bounded();
        assert_eq!(got, want);
        assert!(got.is_core());
    }

    #[test]
    fn nested_sugar_is_expanded() {
        let f = Formula::eventually(Formula::bounded_always(2, Formula::bounded_eventually(1, Formula::atom(1))));
        assert!(!f.is_core());
        assert!(f.expand_bounded().is_core());
    }

    #[test]
    fn size_counts_nodes() {
        let f = Formula::until(Formula::atom(0), Formula::and(Formula::atom(1), Formula::not_atom(2)));
        assert_eq!(f.size(), 5);
    }
}
