use hermitian::counting::{count_fiber, count_subgroup, Budgets};
use hermitian::lpoly::{divides, IntPolynomial};
use hermitian::{count_closed, CurveParams};
use proptest::prelude::*;

fn small_curve() -> impl Strategy<Value = (CurveParams, u64)> {
    (prop::sample::select(vec![2u32, 3, 5, 7]), 1u64..=3, 0u64..=4, 1u64..=12).prop_filter_map(
        "field too large",
        |(p, k, t, n)| {
            let size = (p as f64).powf(n as f64);
            (size <= 4096.0).then(|| (CurveParams::new(p, k, t).unwrap(), n))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_matches_enumeration((params, n) in small_curve()) {
        let b = Budgets::default();
        let closed = count_closed(&params, n).count;
        prop_assert_eq!(&closed, &count_fiber(&params, n, &b).unwrap().count);
        prop_assert_eq!(&closed, &count_subgroup(&params, n, &b).unwrap().count);
    }

    #[test]
    fn product_is_divisible(a in prop::collection::vec(-9i64..=9, 1..5), b in prop::collection::vec(-9i64..=9, 1..5)) {
        let pa = IntPolynomial::from_i64s(&a);
        let pb = IntPolynomial::from_i64s(&b);
        prop_assume!(!pa.is_zero() && !pb.is_zero());
        let prod = pa.mul(&pb);
        prop_assert!(divides(&pa, &prod));
        let d = prod.div_rem(&pa);
        prop_assert!(d.is_exact());
        prop_assert_eq!(d.integer_quotient(), Some(pb));
    }
}
