mod common;

use common::*;
use proptest::prelude::*;
use robsynth::logic::{translate, Letter};
use robsynth::model::Rect;
use robsynth::rng::StreamRng;
use robsynth::synthesis::{
    dilate_target, erode_target, evaluate_reach, product_reach, reach, robust_reach, standard_reach, upper_bound_reach,
    BoundKind, Horizon, RobustPolicy,
};

fn instance(seed: u64) -> (Dense, Vec<bool>) {
    let mut rng = StreamRng::new(seed, 4);
    let n = 2 + rng.below(6);
    let m = 1 + rng.below(3);
    let t = random_dense(&mut rng, n, m);
    let target = (0..n).map(|_| rng.uniform() < 0.3).collect();
    (t, target)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn shifted_operators_match_straight_line_recursion(seed in any::<u64>(), horizon in 1usize..8, delta in 0.0f64..0.2) {
        let (t, target) = instance(seed);
        let mdp = mdp_of(&t);
        for (kind, shift) in [(BoundKind::Lower, -delta), (BoundKind::Upper, delta), (BoundKind::Standard, 0.0)] {
            let (v, _) = reach(&mdp, &target, kind, delta, Horizon::Finite(horizon), None).unwrap();
            let oracle = robust_reach_oracle(&t, &target, horizon, shift);
            for (a, b) in v.initial_values.iter().zip(&oracle) {
                prop_assert!((a - b).abs() <= 1e-12, "{kind:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn lower_standard_upper_are_ordered(seed in any::<u64>(), horizon in 1usize..10, delta in 0.0f64..0.2) {
        let (t, target) = instance(seed);
        let mdp = mdp_of(&t);
        let h = Horizon::Finite(horizon);
        let lo = reach(&mdp, &target, BoundKind::Lower, delta, h, None).unwrap().0;
        let st = standard_reach(&mdp, &target, h, None).unwrap().0;
        let up = reach(&mdp, &target, BoundKind::Upper, delta, h, None).unwrap().0;
        for i in 0..lo.values.len() {
            prop_assert!(lo.values[i] <= st.values[i] + 1e-15);
            prop_assert!(st.values[i] <= up.values[i] + 1e-15);
        }
    }

    #[test]
    fn values_grow_with_horizon_and_shrink_with_delta(seed in any::<u64>(), horizon in 1usize..10, d in 0.0f64..0.1) {
        let (t, target) = instance(seed);
        let mdp = mdp_of(&t);
        let short = reach(&mdp, &target, BoundKind::Lower, d, Horizon::Finite(horizon), None).unwrap().0;
        let long = reach(&mdp, &target, BoundKind::Lower, d, Horizon::Finite(horizon + 1), None).unwrap().0;
        let harsh = reach(&mdp, &target, BoundKind::Lower, d + 0.05, Horizon::Finite(horizon), None).unwrap().0;
        for i in 0..short.initial_values.len() {
            prop_assert!(short.initial_values[i] <= long.initial_values[i] + 1e-12);
            prop_assert!(harsh.initial_values[i] <= short.initial_values[i] + 1e-15);
        }
    }

    #[test]
    fn optimal_policy_attains_the_value(seed in any::<u64>(), horizon in 1usize..8) {
        let (t, target) = instance(seed);
        let mdp = mdp_of(&t);
        let h = Horizon::Finite(horizon);
        let (v, pol) = standard_reach(&mdp, &target, h, None).unwrap();
        let ev = evaluate_reach(&mdp, &target, &pol, h, None).unwrap();
        for (a, b) in v.initial_values.iter().zip(&ev.initial_values) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn eventually_product_equals_plain_reach(seed in any::<u64>(), horizon in 1usize..8) {
        let (t, target) = instance(seed);
        let mdp = mdp_of(&t);
        let dfa = translate("F a", &["a".to_string()]).unwrap();
        let letters: Vec<Option<Vec<Letter>>> = target.iter().map(|&b| Some(vec![Letter(b as u32)])).collect();
        let h = Horizon::Finite(horizon);
        for x0 in 0..target.len() {
            let (_, pp) = product_reach(&mdp, &dfa, &letters, 0.0, 0.0, h, Some(x0)).unwrap();
            let (_, rp) = standard_reach(&mdp, &target, h, Some(x0)).unwrap();
            prop_assert!((pp.r.unwrap() - rp.r.unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn eroded_target_inside_dilated(seed in any::<u64>(), a in -1.0f64..8.0, w in 0.0f64..6.0, eps in 0.0f64..2.0) {
        let mut rng = StreamRng::new(seed, 5);
        let (abs, _) = random_line_abstraction(&mut rng, 7, 2, 1.0);
        let k = [Rect::new(vec![a], vec![a + w]).unwrap()];
        let er = erode_target(&abs, &k, eps).unwrap();
        let di = dilate_target(&abs, &k, eps).unwrap();
        prop_assert!(di.states[abs.sink()]);
        for i in 0..abs.num_cells() {
            prop_assert!(!er.states[i] || di.states[i]);
        }
        let (lo, _) = robust_reach(&abs, &k, eps, 0.01, Horizon::Finite(5), None).unwrap();
        let (up, _) = upper_bound_reach(&abs, &k, eps, 0.01, Horizon::Finite(5), None).unwrap();
        for i in 0..lo.initial_values.len() {
            prop_assert!(lo.initial_values[i] <= up.initial_values[i]);
        }
    }
}

#[test]
fn unbounded_values_are_a_fixed_point() {
    let (t, target) = instance(11);
    let mdp = mdp_of(&t);
    let (v, _) = standard_reach(&mdp, &target, Horizon::Unbounded, None).unwrap();
    let long = robust_reach_oracle(&t, &target, 5000, 0.0);
    for (a, b) in v.initial_values.iter().zip(&long) {
        assert!((a - b).abs() <= 1e-6, "{a} vs {b}");
    }
}

#[test]
fn policy_file_round_trip() {
    let (t, target) = instance(12);
    let (_, pol) = standard_reach(&mdp_of(&t), &target, Horizon::Finite(6), Some(0)).unwrap();
    let path = std::env::temp_dir().join(format!("robsynth-policy-{}.json", std::process::id()));
    pol.save(&path).unwrap();
    let back = RobustPolicy::load(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(back, pol);
}

#[test]
fn corrupt_policy_is_rejected() {
    let (t, target) = instance(13);
    let (_, mut pol) = standard_reach(&mdp_of(&t), &target, Horizon::Finite(2), None).unwrap();
    pol.tables[0][0] = pol.num_inputs as u32;
    assert!(pol.validate().is_err());
}
