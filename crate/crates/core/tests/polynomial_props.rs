use proptest::prelude::*;
use vbetti_core::IntPolynomial;

fn poly() -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-60i64..=60, 0..6).prop_map(IntPolynomial::from_coeffs)
}

fn value_at(p: &IntPolynomial, t: i64) -> i64 {
    p.coeffs().iter().rev().fold(0, |acc, &c| acc * t + c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(p.checked_add(&q).unwrap(), q.checked_add(&p).unwrap());
        prop_assert_eq!(p.checked_mul(&q).unwrap(), q.checked_mul(&p).unwrap());
        prop_assert_eq!(
            p.checked_add(&q).unwrap().checked_add(&r).unwrap(),
            p.checked_add(&q.checked_add(&r).unwrap()).unwrap()
        );
        prop_assert_eq!(
            p.checked_mul(&q).unwrap().checked_mul(&r).unwrap(),
            p.checked_mul(&q.checked_mul(&r).unwrap()).unwrap()
        );
        prop_assert_eq!(
            p.checked_mul(&q.checked_add(&r).unwrap()).unwrap(),
            p.checked_mul(&q).unwrap().checked_add(&p.checked_mul(&r).unwrap()).unwrap()
        );
        prop_assert_eq!(p.checked_add(&IntPolynomial::zero()).unwrap(), p.clone());
        prop_assert_eq!(p.checked_mul(&IntPolynomial::one()).unwrap(), p.clone());
        prop_assert!(p.checked_sub(&p).unwrap().is_zero());
    }

    #[test]
    fn evaluation_is_a_ring_map(p in poly(), q in poly(), t in -3i64..=3) {
        prop_assert_eq!(p.eval(t).unwrap(), value_at(&p, t));
        prop_assert_eq!(p.checked_mul(&q).unwrap().eval(t).unwrap(), value_at(&p, t) * value_at(&q, t));
        prop_assert_eq!(p.checked_sub(&q).unwrap().eval(t).unwrap(), value_at(&p, t) - value_at(&q, t));
    }

    #[test]
    fn display_parse_round_trip(p in poly()) {
        let text = p.to_string();
        prop_assert_eq!(text.parse::<IntPolynomial>().unwrap(), p.clone());
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<IntPolynomial>(&json).unwrap(), p);
    }

    #[test]
    fn degree_of_product(p in poly(), q in poly()) {
        let pq = p.checked_mul(&q).unwrap();
        if p.is_zero() || q.is_zero() {
            prop_assert!(pq.is_zero());
        } else {
            prop_assert_eq!(pq.coeffs().len(), p.coeffs().len() + q.coeffs().len() - 1);
            prop_assert_eq!(pq.leading_coeff(), p.leading_coeff() * q.leading_coeff());
        }
    }
}

#[test]
fn overflow_is_reported() {
    let big = IntPolynomial::constant(i64::MAX);
    assert!(big.checked_add(&IntPolynomial::one()).is_err());
    assert!(big.checked_mul(&IntPolynomial::constant(2)).is_err());
}
