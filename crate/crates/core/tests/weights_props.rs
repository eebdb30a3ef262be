mod common;

use common::*;
use proptest::prelude::*;
use vbetti_core::weights::{solve_weight_system, WeightArray, WeightSystemInput};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn enumeration_matches_brute_force(input in weight_input()) {
        let fast = solve_weight_system(&input);
        prop_assert_eq!(&fast, &brute_weight_solutions(&input));
        for w in &fast {
            prop_assert!(w.satisfies(&input));
        }
        let mut sorted = fast.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted, fast);
    }

    #[test]
    fn diagonal_input_has_exactly_the_diagonal(b in prop::collection::vec(0usize..=4, 1..=4)) {
        let beta = b.iter().map(|&x| x as i64).collect();
        let input = WeightSystemInput::new(b.clone(), beta).unwrap();
        prop_assert_eq!(solve_weight_system(&input), vec![WeightArray::diagonal(&b)]);
    }
}
