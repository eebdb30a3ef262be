mod common;

use common::*;
use proptest::prelude::*;
use vbetti_core::fixtures::BLOWUPS;
use vbetti_core::scissor::{check_blowup_relation, evaluate_beta, evaluate_chi_c, ScissorExpr};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn evaluate_beta_is_a_ring_homomorphism(e in expression(4), f in expression(3)) {
        let reg = &scene().atoms;
        let be = evaluate_beta(&e, reg).unwrap();
        let bf = evaluate_beta(&f, reg).unwrap();
        for t in [-2i64, -1, 0, 1, 2, 3] {
            prop_assert_eq!(be.eval(t).unwrap(), eval_at(&e, reg, t));
        }
        let sum = evaluate_beta(&ScissorExpr::union(e.clone(), f.clone()), reg).unwrap();
        prop_assert_eq!(sum, be.checked_add(&bf).unwrap());
        let prod = evaluate_beta(&ScissorExpr::product(e.clone(), f.clone()), reg).unwrap();
        prop_assert_eq!(prod, be.checked_mul(&bf).unwrap());
        let diff = evaluate_beta(&ScissorExpr::difference(e.clone(), f.clone()), reg).unwrap();
        prop_assert_eq!(diff, be.checked_sub(&bf).unwrap());
        let unit = evaluate_beta(&ScissorExpr::product(e.clone(), ScissorExpr::atom("point")), reg).unwrap();
        prop_assert_eq!(&unit, &be);
        let zero = evaluate_beta(&ScissorExpr::product(e.clone(), ScissorExpr::Empty), reg).unwrap();
        prop_assert!(zero.is_zero());
    }

    #[test]
    fn beta_at_minus_one_is_chi_c(e in expression(4)) {
        let reg = &scene().atoms;
        let chi = evaluate_chi_c(&e, reg).unwrap();
        prop_assert_eq!(chi, chi_c_oracle(&e, reg));
        prop_assert_eq!(evaluate_beta(&e, reg).unwrap().eval(-1).unwrap(), chi);
    }

    #[test]
    fn expressions_round_trip_through_json(e in expression(4)) {
        let json = serde_json::to_string(&e).unwrap();
        prop_assert_eq!(serde_json::from_str::<ScissorExpr>(&json).unwrap(), e);
    }
}

#[test]
fn model_atoms_have_independent_chi_c() {
    let scene = scene();
    for name in MODEL_ATOMS {
        let a = scene.atoms.get(name).unwrap();
        assert_ne!(a.provenance, vbetti_core::scissor::Provenance::Declared, "{name}");
        assert_eq!(a.beta.eval(-1).unwrap(), a.chi_c, "{name}");
    }
}

#[test]
fn blowup_relation_on_every_blowup_fixture() {
    let scene = scene();
    let beta = |n: &str| scene.atoms.get(n).unwrap().beta.clone();
    for (label, x, c, bl, e) in BLOWUPS {
        let v = check_blowup_relation(&beta(x), &beta(c), &beta(bl), &beta(e)).unwrap();
        assert!(v.holds, "{label}: {} vs {}", v.lhs, v.rhs);
        // swapping the exceptional divisor for the center breaks it whenever they differ
        if beta(e) != beta(c) {
            let bad = check_blowup_relation(&beta(x), &beta(c), &beta(bl), &beta(c)).unwrap();
            assert!(!bad.holds, "{label}: corrupted relation still holds");
        }
    }
}
