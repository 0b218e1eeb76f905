use super::*;
use crate::closed::count_closed;

fn c(p: u32, k: u64, t: u64) -> CurveParams {
    CurveParams::new(p, k, t).unwrap()
}

#[test]
fn map_down_identity_for_t1() {
    let params = c(3, 1, 1);
    let field = build_field(3, 2).unwrap();
    assert_eq!(map_down_exponent(&params).unwrap(), BigUint::one());
    for (x, y) in affine_points(&params, &field, &Budgets::default()).unwrap() {
        let pt = AffinePoint::new(x, y);
        assert_eq!(map_down(&pt, &params, &field).unwrap(), pt);
        assert_eq!(map_up(&pt, &params, &field).unwrap(), pt);
    }
}

#[test]
fn zero_x_stays_on_target() {
    let params = c(3, 1, 3);
    let field = build_field(3, 2).unwrap();
    let target = map_down_target(&params);
    for (x, y) in affine_points(&params, &field, &Budgets::default()).unwrap() {
        if x.is_zero() {
            let img = map_down(&AffinePoint::new(x, y.clone()), &params, &field).unwrap();
            assert!(img.x.is_zero() && img.y == y);
            assert!(on_curve(&target, &field, &img));
        }
    }
}

#[test]
fn map_down_examples() {
    let b = Budgets::default();
    let r = check_map_down(&c(3, 1, 3), 2, &b, Exec::default()).unwrap();
    assert_eq!(r.target, c(3, 1, 1));
    assert!(r.well_defined());
    assert_eq!(r.source_points, 27);
    assert!(matches!(check_map_down(&c(2, 1, 2), 2, &b, Exec::default()), Err(Error::InvalidParameter(_))));
    assert!(map_down_exponent(&c(3, 1, 0)).is_err());
    assert_eq!(map_down_exponent(&c(2, 1, 3)).unwrap(), BigUint::from(3u32));
}

#[test]
fn map_up_examples() {
    let b = Budgets::default();
    for n in 1..=4 {
        let r = check_map_up(&c(2, 1, 2), n, &b, Exec::default()).unwrap();
        assert_eq!(r.source, c(2, 2, 1));
        assert!(r.well_defined(), "n={n}");
    }
    let r = check_map_up(&c(3, 1, 3), 2, &b, Exec::default()).unwrap();
    assert_eq!(r.source, c(3, 3, 1));
    assert!(r.well_defined());
    assert!(matches!(check_map_up(&c(3, 1, 2), 2, &b, Exec::default()), Err(Error::InvalidParameter(_))));
    assert!(check_map_up(&c(2, 1, 0), 2, &b, Exec::default()).is_err());
}

#[test]
fn maps_are_well_defined_exhaustively() {
    let b = Budgets::default();
    for (p, k, t) in [(3u32, 1u64, 3u64), (2, 1, 2), (2, 1, 3), (2, 2, 3), (3, 1, 1), (5, 1, 3), (2, 1, 4)] {
        let params = c(p, k, t);
        for n in 1..=12u64 {
            if checked_order(p, n as usize, 1 << 10).is_none() {
                break;
            }
            if t % 2 == 1 {
                let r = check_map_down(&params, n, &b, Exec::default()).unwrap();
                assert!(r.well_defined(), "down {params} n={n}");
                assert_eq!(BigInt::from(r.source_points + 1), count_closed(&params, n).count);
            }
            let r = check_map_up(&params, n, &b, Exec::default()).unwrap();
            assert!(r.well_defined(), "up {params} n={n}");
            assert!(r.image_size <= r.target_points);
        }
    }
}

#[test]
fn off_curve_points_are_detected() {
    let params = c(3, 1, 1);
    let field = build_field(3, 2).unwrap();
    assert!(!on_curve(&params, &field, &AffinePoint::new(field.one(), field.zero())));
    assert!(on_curve(&params, &field, &AffinePoint::new(field.zero(), field.zero())));
}

#[test]
fn sequential_and_parallel_checks_agree() {
    let b = Budgets::default();
    let params = c(2, 1, 3);
    let a = check_map_down(&params, 6, &b, Exec::Sequential).unwrap();
    let p = check_map_down(&params, 6, &b, Exec::Parallel).unwrap();
    assert_eq!(a, p);
}

#[test]
fn quotient_examples() {
    let b = Budgets::default();
    let r = check_quotient_maximality(3, 1, 1, 2, false, &b).unwrap();
    assert_eq!((r.count.clone(), r.genus, r.maximal()), (BigInt::from(16), 1, true));
    let r = check_quotient_maximality(3, 1, 1, 4, false, &b).unwrap();
    assert_eq!((r.count.clone(), r.genus, r.maximal()), (BigInt::from(28), 3, true));
    let r = check_quotient_maximality(2, 2, 1, 5, false, &b).unwrap();
    assert_eq!((r.count.clone(), r.genus, r.maximal()), (BigInt::from(65), 6, true));
    assert!(check_quotient_maximality(3, 1, 1, 3, false, &b).is_err());
    assert!(check_quotient_maximality(3, 1, 2, 2, false, &b).is_err());
    assert!(check_quotient_maximality(3, 1, 1, 1, false, &b).is_err());
}

#[test]
fn quotients_are_maximal() {
    let b = Budgets::default();
    for (p, k, t) in [
        (2u32, 1u64, 1u64),
        (2, 1, 2),
        (2, 1, 3),
        (2, 2, 1),
        (3, 1, 1),
        (3, 1, 3),
        (3, 2, 1),
        (5, 1, 1),
        (7, 1, 1),
        (2, 3, 1),
    ] {
        let params = c(p, k, t);
        for m in quotient_exponents(&params, 1 << 12) {
            for twisted in [false, true] {
                let r = check_quotient_maximality(p, k, t, m, twisted, &b).unwrap();
                assert!(r.maximal(), "{params} m={m} twisted={twisted}: {} vs {}", r.count, r.bound);
            }
        }
    }
}

#[test]
fn twist_constant_is_a_root() {
    for (p, k, n) in [(3u32, 1u64, 2usize), (2, 1, 2), (5, 1, 2), (3, 1, 6), (2, 2, 4)] {
        let field = build_field(p, n).unwrap();
        let mu = twist_constant(&field, k).unwrap();
        assert!(!mu.is_zero());
        let q = (p as u64).pow(k as u32);
        assert_eq!(field.pow(&mu, q), field.neg(&mu));
    }
    assert!(twist_constant(&build_field(3, 3).unwrap(), 1).is_err());
}
