use proptest::prelude::*;
use twotree::closed_form::{
    bent_resistance_alternating, bent_resistance_product, straight_pair_resistance, BentParams,
};
use twotree::delta_y::{reduce_bent, reduce_straight};
use twotree::graph::{bent_2tree, straight_2tree};
use twotree::resistance::resistance_exact;
use twotree::Rational;

#[test]
fn bent_forms_match_engine_up_to_60() {
    for n in 6..=60 {
        for k in 3..=n - 3 {
            let p = BentParams::new(n, k).unwrap();
            let engine = reduce_bent(n, k).unwrap().r;
            assert_eq!(bent_resistance_product(&p), engine, "n={n} k={k}");
            assert_eq!(bent_resistance_alternating(&p), engine, "n={n} k={k}");
        }
    }
}

#[test]
fn straight_formula_matches_engine_up_to_60() {
    for m in 1..=60 {
        assert_eq!(
            straight_pair_resistance(m, 1, m + 1).unwrap(),
            reduce_straight(m + 2).unwrap(),
            "m={m}"
        );
    }
}

#[test]
fn parallel_pair_recombines() {
    for n in 6..=20 {
        for k in 3..=n - 3 {
            let red = reduce_bent(n, k).unwrap();
            let (x, y) = &red.parallel_pair;
            let tails: Rational = red
                .state
                .left_tails()
                .iter()
                .chain(red.state.right_tails())
                .map(|t| &t.t)
                .sum();
            assert_eq!(x * y / (x + y) + tails, red.r, "n={n} k={k}");
        }
    }
}

#[test]
fn bend_never_beats_straight_by_much() {
    // Rewiring one edge changes r(1, n) by less than one unit resistor.
    for n in 6..=40 {
        let straight = reduce_straight(n).unwrap();
        for k in 3..=n - 3 {
            let bent = reduce_bent(n, k).unwrap().r;
            assert!((bent - &straight).abs() < Rational::one(), "n={n} k={k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bent_matches_laplacian(n in 6usize..=30, seed in 0usize..1000) {
        let k = 3 + seed % (n - 5);
        let g = bent_2tree(n, k).unwrap();
        let oracle = resistance_exact(&g, 1, n).unwrap();
        prop_assert_eq!(reduce_bent(n, k).unwrap().r, oracle);
    }

    #[test]
    fn straight_pairs_match_laplacian(m in 1usize..=16, a in 0usize..100, b in 0usize..100) {
        let j = 1 + a % (m + 1);
        let k = 1 + b % (m + 2 - j);
        let g = straight_2tree(m + 2).unwrap();
        prop_assert_eq!(
            straight_pair_resistance(m, j, k).unwrap(),
            resistance_exact(&g, j, j + k).unwrap()
        );
    }

    #[test]
    fn end_to_end_resistance_grows_with_length(n in 3usize..=80) {
        prop_assert!(reduce_straight(n + 1).unwrap() > reduce_straight(n).unwrap());
    }
}
