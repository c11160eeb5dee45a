//! scLTL front end: parsing, bounded-operator expansion, and compilation to
//! minimal DFAs whose accepting locations are absorbing.

mod dfa;
mod formula;
mod letter;
mod nfa;
mod parser;

pub use dfa::{compile_dfa, compile_dfa_with_cap, Dfa, DfaFile, DEFAULT_STATE_CAP};
pub use formula::Formula;
pub use letter::{render_letter, Letter, MAX_ATOMS};
pub use nfa::Nfa;
pub use parser::parse_scltl;

use crate::error::Result;

/// Parse, expand bounded sugar, and compile in one go.
pub fn translate(text: &str, atoms: &[String]) -> Result<Dfa> {
    translate_with_cap(text, atoms, DEFAULT_STATE_CAP)
}

/// [`translate`] with an explicit cap on subset-construction states.
pub fn translate_with_cap(text: &str, atoms: &[String], state_cap: usize) -> Result<Dfa> {
    let f = parse_scltl(text, atoms)?.expand_bounded();
    compile_dfa_with_cap(&f, atoms, state_cap)
}
