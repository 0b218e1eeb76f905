use super::*;
use crate::field::FieldSpec;

fn params(p: u32, k: u64, t: u64) -> CurveParams {
    CurveParams::new(p, k, t).unwrap()
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[test]
fn brute_examples() {
    let b = Budgets::default();
    assert_eq!(count_brute(&params(3, 1, 1), 1, &b).unwrap().count, big(4));
    assert_eq!(count_brute(&params(3, 1, 1), 2, &b).unwrap().count, big(28));
    assert_eq!(count_brute(&params(2, 1, 1), 2, &b).unwrap().count, big(9));
    assert_eq!(count_brute(&params(3, 1, 0), 2, &b).unwrap().count, big(16));
}

#[test]
fn fiber_examples() {
    let b = Budgets::default();
    assert_eq!(count_fiber(&params(3, 1, 1), 2, &b).unwrap().count, big(28));
    assert_eq!(count_fiber(&params(2, 1, 1), 4, &b).unwrap().count, big(9));
    assert_eq!(count_fiber(&params(5, 1, 1), 2, &b).unwrap().count, big(126));
}

#[test]
fn subgroup_examples() {
    let b = Budgets::default();
    assert_eq!(count_subgroup(&params(3, 1, 1), 4, &b).unwrap().count, big(28));
    assert_eq!(count_subgroup(&params(2, 2, 1), 4, &b).unwrap().count, big(65));
}

#[test]
fn engines_agree_on_small_grid() {
    let b = Budgets::default();
    for p in [2u32, 3] {
        for k in 1..=2 {
            for t in 0..=2 {
                let c = params(p, k, t);
                for n in 1..=12u64 {
                    if field_size(p, n).unwrap() > 1 << 12 {
                        break;
                    }
                    let brute = count_brute(&c, n, &b).unwrap();
                    let fiber = count_fiber(&c, n, &b).unwrap();
                    let sub = count_subgroup(&c, n, &b).unwrap();
                    assert_eq!(brute.count, fiber.count, "{c} n={n}");
                    assert_eq!(brute.count, sub.count, "{c} n={n}");
                    brute.check_invariants().unwrap();
                }
            }
        }
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let b = Budgets::default();
    let c = params(2, 2, 1);
    for n in [8u64, 11] {
        let s = count_fiber_with(&c, n, &b, Exec::Sequential).unwrap();
        let p = count_fiber_with(&c, n, &b, Exec::Parallel).unwrap();
        assert_eq!(s, p);
        let s = count_subgroup_with(&c, n, &b, Exec::Sequential).unwrap();
        let p = count_subgroup_with(&c, n, &b, Exec::Parallel).unwrap();
        assert_eq!(s, p);
    }
    let s = count_brute_with(&c, 6, &b, Exec::Sequential).unwrap();
    let p = count_brute_with(&c, 6, &b, Exec::Parallel).unwrap();
    assert_eq!(s.count, p.count);
}

#[test]
fn representation_independence() {
    let b = Budgets::default();
    for (c, n) in [(params(3, 1, 1), 4u64), (params(2, 2, 1), 8), (params(5, 1, 0), 4)] {
        let alt = FieldSpec::with_modulus_rank(c.p, n as usize, 1).unwrap();
        assert_ne!(alt.modulus(), build_field(c.p, n as usize).unwrap().modulus());
        let default = count_fiber(&c, n, &b).unwrap().count;
        assert_eq!(count_fiber_in(&c, alt.clone(), &b, Exec::default()).unwrap().count, default);
        assert_eq!(count_subgroup_in(&c, alt.clone(), &b, Exec::default()).unwrap().count, default);
        assert_eq!(count_brute_in(&c, &alt, Exec::default()).unwrap().count, default);
    }
}

#[test]
fn odd_degrees_give_line_count() {
    let b = Budgets::default();
    for p in [2u32, 3, 5] {
        for k in 1..=2 {
            for t in 0..=3 {
                let c = params(p, k, t);
                for n in (1..=9u64).step_by(2) {
                    if field_size(p, n).unwrap() > 1 << 13 {
                        break;
                    }
                    let expected = BigInt::from(field_size(p, n).unwrap()) + 1;
                    assert_eq!(count_fiber(&c, n, &b).unwrap().count, expected, "{c} n={n}");
                }
            }
        }
    }
}

#[test]
fn budgets_are_hard_errors() {
    let tight = Budgets { brute: 1 << 10, enumeration: 1 << 8, subgroup: 10 };
    assert!(matches!(count_brute(&params(2, 1, 1), 6, &tight), Err(Error::BudgetExceeded { .. })));
    assert!(matches!(count_fiber(&params(2, 1, 1), 9, &tight), Err(Error::BudgetExceeded { .. })));
    // e = gcd(3, 63) = 3, subgroup order 21 > 10.
    assert!(matches!(count_subgroup(&params(2, 1, 1), 6, &tight), Err(Error::BudgetExceeded { .. })));
    assert!(count_brute(&params(2, 1, 1), 5, &tight).is_ok());
}

#[test]
fn record_wire_format() {
    let r = CountRecord::new(params(3, 1, 1), 2, big(28), Method::Brute);
    let json = r.to_json();
    assert_eq!(json, r#"{"p":3,"k":1,"t":1,"n":2,"count":"28","method":"brute"}"#);
    let back: CountRecord = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
    assert_eq!(r.csv_row(), "3,1,1,2,28,brute");
}

#[test]
fn invariants_reject_impossible_counts() {
    let c = params(3, 1, 1);
    assert!(CountRecord::new(c, 2, big(28), Method::Brute).check_invariants().is_ok());
    assert!(CountRecord::new(c, 2, big(29), Method::Brute).check_invariants().is_err());
    assert!(CountRecord::new(c, 2, big(0), Method::Brute).check_invariants().is_err());
    // Genus 0: only p^n + 1 is admissible.
    let g0 = params(2, 1, 0);
    assert!(CountRecord::new(g0, 3, big(9), Method::Brute).check_invariants().is_ok());
    assert!(CountRecord::new(g0, 3, big(10), Method::Brute).check_invariants().is_err());
}

#[test]
fn artin_schreier_examples() {
    let b = Budgets::default();
    assert_eq!(count_artin_schreier(3, 1, 2, Sign::Plus, None, 2, &b).unwrap(), big(16));
    assert_eq!(count_artin_schreier(3, 1, 4, Sign::Plus, None, 2, &b).unwrap(), big(28));
    assert_eq!(count_artin_schreier(3, 1, 1, Sign::Plus, None, 1, &b).unwrap(), big(4));
    assert_eq!(count_artin_schreier(2, 2, 5, Sign::Plus, None, 4, &b).unwrap(), big(65));
    let f9 = build_field(3, 2).unwrap();
    assert!(count_artin_schreier_in(&f9, 1, 2, Sign::Plus, Some(&f9.zero()), &b, Exec::default()).is_err());
}

/// Direct pair enumeration of `y^(p^k) + s y = mu x^m`.
fn artin_schreier_pairs(field: &FieldSpec, k: u64, m: u64, sign: Sign, mu: &FieldElement) -> u64 {
    let s = field.from_int(sign.as_i64());
    let pk = (field.p() as u64).pow(k as u32);
    let mut count = 1;
    for x in field.elements() {
        let rhs = field.mul(mu, &field.pow(&x, m));
        for y in field.elements() {
            if field.add(&field.pow(&y, pk), &field.mul(&s, &y)) == rhs {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn artin_schreier_matches_pair_enumeration() {
    let b = Budgets::default();
    for (p, n) in [(3u32, 2usize), (2, 3), (5, 2), (2, 4)] {
        let f = build_field(p, n).unwrap();
        for k in 1..=2u64 {
            for m in [1u64, 2, 3, 5] {
                for sign in [Sign::Plus, Sign::Minus] {
                    for mu_idx in [1u64, 2, f.order() - 1] {
                        let mu = f.from_index(mu_idx);
                        let fast = count_artin_schreier_in(&f, k, m, sign, Some(&mu), &b, Exec::default()).unwrap();
                        assert_eq!(fast, BigInt::from(artin_schreier_pairs(&f, k, m, sign, &mu)));
                    }
                }
            }
        }
    }
}

#[test]
fn trace_form_examples() {
    let b = Budgets::default();
    let f9 = build_field(3, 2).unwrap();
    let n = count_trace_form(&f9, 1, &f9.one(), 2, &b).unwrap();
    assert_eq!(n, 5);
    assert_eq!(curve_count_from_trace_zeros(3, n), big(16));
    // y^3 - y = x^2 over F_9, counted directly.
    assert_eq!(artin_schreier_pairs(&f9, 1, 2, Sign::Minus, &f9.one()), 16);
    // Constant form with trace-zero mu.
    let mu = f9.root();
    assert!(f9.trace(&mu, 1).unwrap().is_zero());
    assert_eq!(count_trace_form(&f9, 1, &mu, 0, &b).unwrap(), 9);
    assert!(matches!(count_trace_form(&f9, 3, &mu, 2, &b), Err(Error::NotSubfield { .. })));
}

#[test]
fn trace_form_counts_are_admissible() {
    let b = Budgets::default();
    // (p, n, d): quadratic forms x -> Tr(mu x^(q^i + q^j)) with q = p^d.
    for (p, n, d) in [
        (3u32, 2usize, 1usize),
        (3, 3, 1),
        (3, 4, 1),
        (3, 5, 1),
        (5, 2, 1),
        (5, 3, 1),
        (5, 4, 1),
        (3, 4, 2),
        (3, 6, 2),
        (7, 3, 1),
    ] {
        let f = build_field(p, n).unwrap();
        let q = (p as u64).pow(d as u32);
        let rel = (n / d) as u64;
        let admissible = admissible_quadratic_zero_counts(q, rel);
        let exps: Vec<u64> = (0..rel as u32).flat_map(|i| (0..=i).map(move |j| q.pow(i) + q.pow(j))).collect();
        for &m in &exps {
            for mu_idx in [1u64, 2, 5, f.order() - 2] {
                let mu = f.from_index(mu_idx % f.order());
                if mu.is_zero() {
                    continue;
                }
                let zeros = count_trace_form(&f, d, &mu, m, &b).unwrap();
                assert!(
                    admissible.contains(&BigInt::from(zeros)),
                    "p={p} n={n} d={d} M={m} N={zeros} not in {admissible:?}"
                );
                let curve =
                    count_artin_schreier_in(&f, d as u64, m, Sign::Minus, Some(&mu), &b, Exec::default()).unwrap();
                assert_eq!(curve, curve_count_from_trace_zeros(q, zeros));
            }
        }
    }
}

#[test]
fn affine_points_satisfy_equation() {
    let b = Budgets::default();
    for (c, n) in [(params(3, 1, 1), 2usize), (params(2, 1, 2), 4), (params(3, 1, 0), 4)] {
        let f = build_field(c.p, n).unwrap();
        let pts = affine_points(&c, &f, &b).unwrap();
        let m = c.x_exponent();
        let pk = big_pow(c.p, c.k);
        for (x, y) in &pts {
            assert_eq!(f.add(&f.pow_big(y, &pk), y), f.pow_big(x, &m));
        }
        let total = BigInt::from(pts.len()) + 1;
        assert_eq!(total, count_brute(&c, n as u64, &b).unwrap().count);
    }
}
