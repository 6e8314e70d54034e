//! Property tests for the divergence, affinity and Monte-Carlo paths.

use chernoff_sbm_core::affinity::{affinity_bruteforce, affinity_grouped};
use chernoff_sbm_core::chernoff::{
    alpha_divergence, chernoff_information, log_shannon_lower_bound, tilted_llr_mean, tilted_mc_affinity, ALPHA_MAX,
    ALPHA_MIN,
};
use chernoff_sbm_core::{Group, GroupedPair, HypothesisPair};
use proptest::prelude::*;

fn pair_strategy(max_len: usize) -> impl Strategy<Value = HypothesisPair> {
    prop::collection::vec((0.01f64..0.99, 0.01f64..0.99), 1..=max_len)
        .prop_filter("needs a differing coordinate", |v| v.iter().any(|(a, b)| (a - b).abs() > 1e-3))
        .prop_map(|v| {
            let (p0, p1) = v.into_iter().unzip();
            HypothesisPair::new(p0, p1).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn divergence_is_concave(pair in pair_strategy(30), a in 0.01f64..0.99, b in 0.01f64..0.99) {
        let mid = alpha_divergence(&pair, 0.5 * (a + b)).unwrap();
        let ends = 0.5 * (alpha_divergence(&pair, a).unwrap() + alpha_divergence(&pair, b).unwrap());
        prop_assert!(mid >= ends - 1e-12);
    }

    #[test]
    fn optimum_is_interior_and_stationary(pair in pair_strategy(30), a in 0.01f64..0.99) {
        let info = chernoff_information(&pair).unwrap();
        prop_assert!(info.alpha_star > ALPHA_MIN && info.alpha_star < ALPHA_MAX);
        prop_assert!(info.d_star > 0.0);
        prop_assert!(alpha_divergence(&pair, a).unwrap() <= info.d_star + 1e-12);
        prop_assert!(tilted_llr_mean(&pair, info.alpha_star).abs() <= 1e-8);
        let swapped = chernoff_information(&pair.swapped()).unwrap();
        prop_assert!((swapped.alpha_star - (1.0 - info.alpha_star)).abs() <= 1e-9);
        prop_assert!((swapped.d_star - info.d_star).abs() <= 1e-12);
    }

    #[test]
    fn affinity_sits_between_bounds(pair in pair_strategy(12)) {
        let eta = affinity_bruteforce(&pair).unwrap();
        let info = chernoff_information(&pair).unwrap();
        prop_assert!(eta <= (-info.d_star).exp() + 1e-12);
        prop_assert!(log_shannon_lower_bound(&pair).unwrap() <= eta.ln());
        prop_assert!((affinity_grouped(&pair.group()).unwrap().eta - eta).abs() <= 1e-12);
    }

    #[test]
    fn grouped_affinity_is_symmetric_and_order_free(
        groups in prop::collection::vec((0.02f64..0.98, 0.02f64..0.98, 1u64..40), 1..5),
        rot in 0usize..5,
    ) {
        let gs: Vec<Group> = groups.iter().map(|&(p0, p1, count)| Group { p0, p1, count }).collect();
        prop_assume!(gs.iter().any(|g| (g.p0 - g.p1).abs() > 1e-3));
        let pair = GroupedPair::from_groups(gs.clone()).unwrap();
        let mut rotated = gs;
        let r = rot % rotated.len();
        rotated.rotate_left(r);
        let a = affinity_grouped(&pair).unwrap();
        let b = affinity_grouped(&GroupedPair::from_groups(rotated).unwrap()).unwrap();
        let c = affinity_grouped(&pair.swapped()).unwrap();
        prop_assert_eq!(a.log_eta.to_bits(), b.log_eta.to_bits());
        prop_assert_eq!(a.log_eta.to_bits(), c.log_eta.to_bits());
        prop_assert!(a.eta > 0.0 && a.eta <= 1.0);
    }

    #[test]
    fn natural_parameters_round_trip(pair in pair_strategy(20)) {
        let back = pair.to_natural().to_pair().unwrap();
        for (x, y) in pair.p0().iter().chain(pair.p1()).zip(back.p0().iter().chain(back.p1())) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }
}

#[test]
fn monte_carlo_within_four_standard_errors() {
    for (pair, seed) in [
        (GroupedPair::iid(0.55, 0.45, 2000).unwrap(), 1),
        (GroupedPair::from_groups([Group { p0: 0.3, p1: 0.7, count: 300 }, Group { p0: 0.1, p1: 0.15, count: 900 }]).unwrap(), 2),
    ] {
        let exact = affinity_grouped(&pair).unwrap().eta;
        let mc = tilted_mc_affinity(&pair, 200_000, seed).unwrap();
        assert!((mc.estimate - exact).abs() <= 4.0 * mc.std_error, "{} vs {exact} (se {})", mc.estimate, mc.std_error);
        assert!(mc.rel_std_error < 0.05);
    }
}

#[test]
fn monte_carlo_is_reproducible() {
    let pair = GroupedPair::iid(0.3, 0.7, 500).unwrap();
    let a = tilted_mc_affinity(&pair, 50_000, 9).unwrap();
    let b = tilted_mc_affinity(&pair, 50_000, 9).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.estimate, tilted_mc_affinity(&pair, 50_000, 10).unwrap().estimate);
}
