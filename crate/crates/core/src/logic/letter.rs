use std::fmt;

use serde::{Deserialize, Serialize};

/// Maximum number of atomic propositions; the alphabet is enumerated explicitly.
pub const MAX_ATOMS: usize = 16;

/// A letter of the alphabet 2^AP, stored as a bitmask over atom indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Letter(pub u32);

impl Letter {
    pub const EMPTY: Letter = Letter(0);

    pub fn from_atoms(indices: impl IntoIterator<Item = usize>) -> Self {
        Letter(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn contains(self, atom: usize) -> bool {
        self.0 & (1 << atom) != 0
    }

    pub fn atoms(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.0 & (1 << i) != 0)
    }

    /// Atom names of this letter in atom-list order.
    pub fn names(self, atoms: &[String]) -> Vec<String> {
        self.atoms().map(|i| atoms[i].clone()).collect()
    }

    /// Resolve atom names against an atom list.
    pub fn from_names<S: AsRef<str>>(names: &[S], atoms: &[String]) -> Option<Self> {
        let mut bits = 0u32;
        for n in names {
            let i = atoms.iter().position(|a| a == n.as_ref())?;
            bits |= 1 << i;
        }
        Some(Letter(bits))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.atoms().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "p{i}")?;
        }
        write!(f, "}}")
    }
}

/// Render a letter with atom names, e.g. `{k}` or `{}`.
pub fn render_letter(letter: Letter, atoms: &[String]) -> String {
    format!("{{{}}}", letter.names(atoms).join(","))
}
