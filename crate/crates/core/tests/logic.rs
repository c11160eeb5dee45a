mod common;

use common::*;
use proptest::prelude::*;
use robsynth::logic::{parse_scltl, translate, Dfa, DfaFile, Formula, Letter};
use robsynth::Error;

fn atoms() -> Vec<String> {
    ATOM_NAMES.iter().map(|s| s.to_string()).collect()
}

fn syn() -> impl Strategy<Value = Syn> {
    let leaf = prop_oneof![Just(Syn::True), (0u8..2, any::<bool>()).prop_map(|(i, p)| Syn::Lit(i, p))];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Syn::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Syn::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Syn::Until(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Syn::Next(Box::new(a))),
            inner.prop_map(|a| Syn::Ev(Box::new(a))),
        ]
    })
}

fn word() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..4, 0..7)
}

fn letters(w: &[u32]) -> Vec<Letter> {
    w.iter().map(|&l| Letter(l)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn language_matches_good_prefix_oracle(f in syn()) {
        let dfa = translate(&f.render(), &atoms()).unwrap();
        let oracle = GoodPrefixOracle::new(f.to_ltl(), 2);
        prop_assert_eq!(compare_on_words(&dfa, &oracle, 6), None);
    }

    #[test]
    fn satisfied_words_are_accepted(f in syn(), w in word()) {
        let dfa = translate(&f.render(), &atoms()).unwrap();
        if finite_holds(&f, &w, 0) {
            prop_assert!(dfa.accepts(&letters(&w)).unwrap());
        }
    }

    #[test]
    fn acceptance_is_extension_closed(f in syn(), w in word(), l in 0u32..4) {
        let dfa = translate(&f.render(), &atoms()).unwrap();
        let mut longer = letters(&w);
        let before = dfa.accepts(&longer).unwrap();
        longer.push(Letter(l));
        prop_assert!(!before || dfa.accepts(&longer).unwrap());
    }

    #[test]
    fn compiled_dfa_is_minimal(f in syn()) {
        let dfa = translate(&f.render(), &atoms()).unwrap();
        prop_assert_eq!(dfa.minimize().num_locations(), dfa.num_locations());
    }

    #[test]
    fn file_round_trip(f in syn()) {
        let dfa = translate(&f.render(), &atoms()).unwrap();
        let text = serde_json::to_string(&dfa.to_file()).unwrap();
        let back = Dfa::from_file(&serde_json::from_str::<DfaFile>(&text).unwrap()).unwrap();
        prop_assert_eq!(back, dfa);
    }
}

#[test]
fn bounded_always_counts_consecutive_steps() {
    let names = vec!["k".to_string()];
    let dfa = translate("F (G<=3 k)", &names).unwrap();
    assert_eq!(dfa.num_locations(), 5);
    let k = Letter(1);
    let none = Letter(0);
    assert!(!dfa.accepts(&[k, k, k, none, k, k, k]).unwrap());
    assert!(dfa.accepts(&[none, k, k, k, k]).unwrap());
}

#[test]
fn bounded_sugar_expands_to_core() {
    let names = vec!["a".to_string()];
    let f = parse_scltl("F<=2 a", &names).unwrap().expand_bounded();
    assert!(f.is_core());
    let expected = Formula::or(Formula::atom(0), Formula::next(Formula::or(Formula::atom(0), Formula::next(Formula::atom(0)))));
    let d1 = robsynth::logic::compile_dfa(&f, &names).unwrap();
    let d2 = robsynth::logic::compile_dfa(&expected, &names).unwrap();
    assert_eq!(d1, d2);
}

#[test]
fn parse_errors_are_typed() {
    let names = atoms();
    assert!(matches!(parse_scltl("a &", &names), Err(Error::Syntax { .. })));
    assert!(matches!(parse_scltl("!(a | b)", &names), Err(Error::NegatedNonAtom { .. })));
    assert!(matches!(parse_scltl("F c", &names), Err(Error::UnknownAtom { .. })));
}
