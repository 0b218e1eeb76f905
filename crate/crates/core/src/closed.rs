//! Closed-form counts.
//!
//! `count_closed` splits `n` by the reduction modulus `s`, evaluates the
//! base degree `m = gcd(n, s)` by reducing to a smaller Hermitian-type curve
//! that is maximal or minimal over F_{p^m}, then extends to degree `n` with
//! the supersingular extension rule. No enumeration happens, so any `n` is
//! cheap.
//!
//! Three published closed formulas are evaluated verbatim for auditing:
//! `printed_general_deviation` (any `t >= 1`), `printed_hermitian_deviation`
//! (`t = 1`) and `printed_t0_deviation` (`t = 0`, p odd).
//! `discrepancy_report` compares the general one with the ground truth.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::counting::{count_brute, Budgets, CountRecord, Method};
use crate::curve::{big_pow, CurveParams};
use crate::error::{Error, Result};
use crate::field::{checked_order, gcd};
use crate::par::{map_ordered, Exec};

/// Normalized deviation `T` with `count = p^n + 1 - p^(n/2) T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub params: CurveParams,
    pub n: u64,
    pub value: BigInt,
}

fn pow_int(p: u32, e: u64) -> BigInt {
    BigInt::from(big_pow(p, e))
}

impl Deviation {
    pub fn new(params: CurveParams, n: u64, value: BigInt) -> Self {
        Deviation { params, n, value }
    }

    /// Recovers `T` from a count; fails unless `p^(n/2)` divides the excess exactly.
    pub fn from_count(params: CurveParams, n: u64, count: &BigInt) -> Result<Self> {
        let excess = params.excess(n, count);
        if n % 2 == 1 {
            if !excess.is_zero() {
                return Err(Error::Inconsistent(format!(
                    "odd degree {n} has nonzero excess {excess}, so T is irrational"
                )));
            }
            return Ok(Deviation::new(params, n, BigInt::zero()));
        }
        let half = pow_int(params.p, n / 2);
        let (q, r) = excess.div_rem(&half);
        if !r.is_zero() {
            return Err(Error::Inconsistent(format!("excess {excess} is not divisible by p^{}", n / 2)));
        }
        Ok(Deviation::new(params, n, -q))
    }

    /// `-p^(n/2) T`, the excess `count - (p^n + 1)`.
    pub fn excess(&self) -> Result<BigInt> {
        if self.value.is_zero() {
            return Ok(BigInt::zero());
        }
        if self.n % 2 == 1 {
            return Err(Error::Inconsistent(format!(
                "nonzero deviation {} at odd degree {} has no integer count",
                self.value, self.n
            )));
        }
        Ok(-(pow_int(self.params.p, self.n / 2) * &self.value))
    }

    pub fn count(&self) -> Result<BigInt> {
        Ok(pow_int(self.params.p, self.n) + 1 + self.excess()?)
    }
}

/// Legendre symbol `(a | p)` by Euler's criterion.
pub fn legendre(a: i64, p: u32) -> Result<i32> {
    if p == 2 || !crate::field::is_prime(p as u64) {
        return Err(Error::InvalidParameter(format!("Legendre symbol needs an odd prime, got {p}")));
    }
    let r = a.rem_euclid(p as i64) as u32;
    if r == 0 {
        return Ok(0);
    }
    let e = crate::field::modp::pow_mod(r, (p as u64 - 1) / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

/// `q = p^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u32,
    pub r: u64,
}

/// Extends the excess `#X(F_{q^m}) - (q^m + 1)` of a supersingular curve with
/// period (or any valid reduction modulus) `s` to degree `n`, where
/// `m = gcd(n, s)`.
pub fn extend_supersingular(base_excess: &BigInt, q: PrimePower, m: u64, n: u64, s: u64) -> Result<BigInt> {
    if n == 0 || m == 0 || s == 0 {
        return Err(Error::InvalidParameter("degrees and modulus must be positive".into()));
    }
    if m != gcd(n, s) {
        return Err(Error::InvalidParameter(format!("base degree {m} is not gcd({n}, {s})")));
    }
    let t = n / m;
    let scale_exp = q.r * (n - m);
    if scale_exp % 2 == 1 {
        return Err(Error::Inconsistent("q^((n-m)/2) is not an integer".into()));
    }
    let scaled = pow_int(q.p, scale_exp / 2) * base_excess;
    let odd_base = (m * q.r) % 2 == 1;
    let factor: i32 = if !odd_base {
        1
    } else if q.p != 2 {
        if t.is_multiple_of(q.p as u64) {
            1
        } else {
            let sign = if ((t - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
            let a = (t % q.p as u64) as i64 * sign;
            legendre(a, q.p)?
        }
    } else if ((t * t - 1) / 8).is_multiple_of(2) {
        1
    } else {
        -1
    };
    Ok(scaled * factor)
}

/// Extends a deviation of `H_{k,t}` (over F_p, modulus `s` of the curve) to degree `n`.
pub fn extend_deviation(base: &Deviation, n: u64) -> Result<Deviation> {
    let s = base.params.reduction_modulus();
    let excess = extend_supersingular(&base.excess()?, PrimePower { p: base.params.p, r: 1 }, base.n, n, s)?;
    Deviation::from_count(base.params, n, &(pow_int(base.params.p, n) + 1 + excess))
}

/// `T` of `H_{k,0}` over F_{p^m}, p odd, from the base cases at degree
/// `m' = gcd(m, 4k)`: `m' | k` gives `p^m' + 1`; `m'/2 | k` reduces to the
/// maximal `H_{m'/2,0}`; otherwise the curve is minimal over F_{p^m'}.
fn h_k0_deviation(p: u32, k: u64, m: u64) -> BigInt {
    let base = gcd(m, 4 * k);
    if base % 2 == 1 || k.is_multiple_of(base) {
        BigInt::zero()
    } else if k.is_multiple_of(base / 2) {
        -(pow_int(p, base / 2) - 1u32)
    } else {
        pow_int(p, base / 4) - 1
    }
}

/// `T` at a base degree `m | s`.
fn base_deviation(params: &CurveParams, m: u64) -> BigInt {
    let CurveParams { p, k, t } = *params;
    let kt = k * t;
    if t == 0 || kt % m == 0 {
        // x^(p^(kt)) = x on F_{p^m}: the count is that of H_{k,0}.
        return if p == 2 { BigInt::zero() } else { h_k0_deviation(p, k, m) };
    }
    if m.is_multiple_of(2) && kt % (m / 2) == 0 {
        // Reduces to H_{c, d/c} over F_{p^(2d)}, d = m/2: maximal when d/c is
        // odd (or always for p = 2), otherwise p^m + 1 - (p^c - 1) p^(m/2).
        let d = m / 2;
        let c = gcd(k, d);
        return if p == 2 || (d / c) % 2 == 1 { -((pow_int(p, c) - 1u32) * pow_int(p, d)) } else { pow_int(p, c) - 1 };
    }
    // m | 4kt, m not dividing 2kt: reduces to H_{c, m/(4c)}, minimal over F_{p^m}.
    debug_assert!((4 * kt) % m == 0 && (2 * kt) % m != 0);
    let c = gcd(k, m / 4);
    (pow_int(p, c) - 1u32) * pow_int(p, m / 4)
}

/// Closed-form normalized deviation at any degree.
pub fn closed_deviation(params: &CurveParams, n: u64) -> Deviation {
    if params.is_genus_zero() {
        return Deviation::new(*params, n, BigInt::zero());
    }
    let s = params.reduction_modulus();
    let m = gcd(n, s);
    let base = Deviation::new(*params, m, base_deviation(params, m));
    debug_assert!(m.is_multiple_of(2) || base.value.is_zero());
    // With r = 1 and m even the extension leaves T unchanged; with m odd the
    // base deviation is zero. Both still go through the extension rule.
    extend_deviation(&base, n).expect("base degree is gcd(n, s) and the base excess is integral")
}

/// The closed-form count; runs in time polynomial in `log n`.
pub fn count_closed(params: &CurveParams, n: u64) -> CountRecord {
    if params.is_genus_zero() {
        return CountRecord::new(*params, n, pow_int(params.p, n) + 1, Method::Closed);
    }
    let s = params.reduction_modulus();
    let m = gcd(n, s);
    let base = Deviation::new(*params, m, base_deviation(params, m));
    let base_excess = base.excess().expect("base deviation is integral");
    let excess = extend_supersingular(&base_excess, PrimePower { p: params.p, r: 1 }, m, n, s)
        .expect("base degree is gcd(n, s)");
    CountRecord::new(*params, n, pow_int(params.p, n) + 1 + excess, Method::Closed)
}

fn two_adic(mut k: u64) -> u32 {
    let mut v = 0;
    while k.is_multiple_of(2) {
        k /= 2;
        v += 1;
    }
    v
}

/// The published `t = 0`, p odd formula, with `d = (n, 4k)`, `k = 2^v w`.
pub fn printed_t0_deviation(p: u32, k: u64, n: u64) -> Result<Deviation> {
    if p == 2 {
        return Err(Error::InvalidParameter("the t = 0 formula needs an odd prime".into()));
    }
    let params = CurveParams::new(p, k, 0)?;
    let v = two_adic(k);
    let d = gcd(n, 4 * k);
    let value = if !d.is_multiple_of(1 << (v + 1)) {
        BigInt::zero()
    } else if !d.is_multiple_of(1 << (v + 2)) {
        -(pow_int(p, d / 2) - 1u32)
    } else {
        pow_int(p, d / 4) - 1
    };
    Ok(Deviation::new(params, n, value))
}

/// The published Hermitian (`t = 1`) formula, with `d = (n, 4k)`.
pub fn printed_hermitian_deviation(p: u32, k: u64, n: u64) -> Result<Deviation> {
    let params = CurveParams::hermitian(p, k)?;
    let v = two_adic(k);
    let d = gcd(n, 4 * k);
    let value = if !d.is_multiple_of(1 << (v + 1)) {
        BigInt::zero()
    } else if !d.is_multiple_of(1 << (v + 2)) {
        -(pow_int(p, d / 2) * (pow_int(p, d / 2) - 1u32))
    } else {
        pow_int(p, d / 4) * (pow_int(p, d / 4) - 1u32)
    };
    Ok(Deviation::new(params, n, value))
}

/// The published general formula exactly as printed: six cases in `d = (n, 4kt)`,
/// `c = (n, 4k)` and `eps = 0` iff `p = 2`. No correction is applied.
pub fn printed_general_deviation(p: u32, k: u64, t: u64, n: u64) -> Result<Deviation> {
    if t == 0 {
        return Err(Error::InvalidParameter("the printed general formula needs t >= 1".into()));
    }
    let params = CurveParams::new(p, k, t)?;
    let v = two_adic(k);
    let kt = k * t;
    let d = gcd(n, 4 * kt);
    let c = gcd(n, 4 * k);
    let eps = if p == 2 { BigInt::zero() } else { BigInt::one() };
    let value = if kt.is_multiple_of(d) {
        if !d.is_multiple_of(1 << (v + 1)) {
            BigInt::zero()
        } else if !d.is_multiple_of(1 << (v + 2)) {
            eps * (pow_int(p, c / 2) - 1u32)
        } else {
            eps * (pow_int(p, c / 4) - 1u32)
        }
    } else if d.is_multiple_of(2) && kt.is_multiple_of(d / 2) {
        if t.is_multiple_of(2) {
            pow_int(p, c) - 1
        } else {
            -((pow_int(p, c) - 1u32) * (pow_int(p, d / 2) - 1u32))
        }
    } else {
        (pow_int(p, c) - 1u32) * (pow_int(p, d / 4) - 1u32)
    };
    Ok(Deviation::new(params, n, value))
}

/// One line of the printed-formula audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyRow {
    pub params: CurveParams,
    pub n: u64,
    pub printed: BigInt,
    pub truth: BigInt,
    pub truth_method: Method,
}

#[derive(Serialize)]
struct DiscrepancyWire<'a> {
    p: u32,
    k: u64,
    t: u64,
    n: u64,
    printed_t: String,
    true_t: String,
    agree: bool,
    truth_method: &'a str,
}

pub const DISCREPANCY_CSV_HEADER: &str = "p,k,t,n,printed_T,true_T,agree";

impl DiscrepancyRow {
    pub fn agree(&self) -> bool {
        self.printed == self.truth
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DiscrepancyWire {
            p: self.params.p,
            k: self.params.k,
            t: self.params.t,
            n: self.n,
            printed_t: self.printed.to_string(),
            true_t: self.truth.to_string(),
            agree: self.agree(),
            truth_method: self.truth_method.as_str(),
        })
        .expect("row serializes")
    }

    pub fn csv_row(&self) -> String {
        let c = &self.params;
        format!("{},{},{},{},{},{},{}", c.p, c.k, c.t, self.n, self.printed, self.truth, self.agree())
    }
}

/// Ground-truth deviation: brute force where the budget allows, else closed form.
pub fn ground_truth(params: &CurveParams, n: u64, budgets: &Budgets) -> Result<(Deviation, Method)> {
    let within = checked_order(params.p, 2 * n as usize, budgets.brute).is_some();
    let record = if within { count_brute(params, n, budgets)? } else { count_closed(params, n) };
    Ok((Deviation::from_count(*params, n, &record.count)?, record.method))
}

/// Compares the printed general formula with the ground truth over the given
/// grid (`t = 0` entries are skipped). Rows come back sorted by `(p, k, t, n)`.
pub fn discrepancy_report(
    ps: &[u32],
    ks: &[u64],
    ts: &[u64],
    ns: &[u64],
    budgets: &Budgets,
    exec: Exec,
) -> Result<Vec<DiscrepancyRow>> {
    let mut grid = Vec::new();
    for &p in ps {
        for &k in ks {
            for &t in ts.iter().filter(|&&t| t >= 1) {
                for &n in ns {
                    grid.push((CurveParams::new(p, k, t)?, n));
                }
            }
        }
    }
    grid.sort();
    grid.dedup();
    map_ordered(exec, &grid, |(params, n)| {
        let printed = printed_general_deviation(params.p, params.k, params.t, *n)?;
        let (truth, method) = ground_truth(params, *n, budgets)?;
        Ok(DiscrepancyRow { params: *params, n: *n, printed: printed.value, truth: truth.value, truth_method: method })
    })
    .into_iter()
    .collect()
}

/// `|T|` bound check used by reports: `|T| <= 2g`.
pub fn within_weil_bound(dev: &Deviation) -> bool {
    dev.value.abs() <= BigInt::from(dev.params.genus()) * 2
}
