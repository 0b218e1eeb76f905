//! Exact point counts of `H_{k,t}` and related Artin-Schreier curves.
//!
//! Three enumeration engines of decreasing cost, each an oracle for the
//! others:
//!
//! * `count_brute` walks every pair `(x, y)` of F_{p^n}^2, evaluating both
//!   sides of the equation by square-and-multiply.
//! * `count_fiber` uses that `L(y) = y^(p^k) + y` is F_p-linear: the fiber
//!   over `x` is empty or a coset of `ker L`.
//! * `count_subgroup` additionally uses that `x -> x^M` is `e`-to-1 from
//!   F^* onto the subgroup of index `e = gcd(M, p^n - 1)`, so only that
//!   subgroup is walked.
//!
//! All three add exactly one point at infinity.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::curve::{big_pow, CurveParams};
use crate::error::{Error, Result};
use crate::field::{build_field, checked_order, gcd, FieldElement, FieldSpec, Matrix, Sign};
use crate::par::{sum_chunks, Exec};

/// Provenance of a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Fiber,
    Subgroup,
    Closed,
    Formula,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Fiber => "fiber",
            Method::Subgroup => "subgroup",
            Method::Closed => "closed",
            Method::Formula => "formula",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Enumeration limits. Exceeding one is an error, never a truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Maximum `p^(2n)` for `count_brute`.
    pub brute: u64,
    /// Maximum `p^n` for element enumeration (`count_fiber` and friends).
    pub enumeration: u64,
    /// Maximum subgroup order `(p^n - 1) / e` for `count_subgroup`.
    pub subgroup: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { brute: 1 << 26, enumeration: 1 << 24, subgroup: 1 << 24 }
    }
}

/// An exact point count with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRecord {
    pub params: CurveParams,
    pub n: u64,
    pub count: BigInt,
    pub method: Method,
}

/// Wire form: `{"p":3,"k":1,"t":1,"n":2,"count":"28","method":"brute"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct CountRecordWire {
    p: u32,
    k: u64,
    t: u64,
    n: u64,
    count: String,
    method: Method,
}

impl Serialize for CountRecord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CountRecordWire {
            p: self.params.p,
            k: self.params.k,
            t: self.params.t,
            n: self.n,
            count: self.count.to_string(),
            method: self.method,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CountRecord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CountRecordWire::deserialize(d)?;
        let count = w.count.parse::<BigInt>().map_err(serde::de::Error::custom)?;
        Ok(CountRecord { params: CurveParams { p: w.p, k: w.k, t: w.t }, n: w.n, count, method: w.method })
    }
}

/// Serializes a big integer as a decimal string.
pub fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub const CSV_HEADER: &str = "p,k,t,n,count,method";

impl CountRecord {
    pub fn new(params: CurveParams, n: u64, count: BigInt, method: Method) -> Self {
        CountRecord { params, n, count, method }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("count record serializes")
    }

    pub fn csv_row(&self) -> String {
        let c = &self.params;
        format!("{},{},{},{},{},{}", c.p, c.k, c.t, self.n, self.count, self.method)
    }

    /// `count >= 1` and `|count - (p^n + 1)| <= 2 g p^(n/2)`, compared
    /// exactly after squaring both sides.
    pub fn check_invariants(&self) -> Result<()> {
        if self.count < BigInt::one() {
            return Err(Error::Validation(format!("count {} is below 1", self.count)));
        }
        let excess = self.params.excess(self.n, &self.count);
        let g = BigInt::from(self.params.genus());
        let lhs = &excess * &excess;
        let rhs = BigInt::from(4u32) * &g * &g * BigInt::from(big_pow(self.params.p, self.n));
        if lhs > rhs {
            return Err(Error::Validation(format!(
                "count {} over F_{}^{} violates the Hasse-Weil bound",
                self.count, self.params.p, self.n
            )));
        }
        Ok(())
    }
}

fn budget_error(what: &'static str, needed: impl ToString, budget: u64) -> Error {
    Error::BudgetExceeded { what, needed: needed.to_string(), budget }
}

/// `M mod (p^n - 1)` for `M = p^(kt) + 1`, using `p^n = 1` in the unit group.
fn exponent_mod_group(params: &CurveParams, field: &FieldSpec) -> u64 {
    let group = field.order() - 1;
    if group == 0 {
        return 0;
    }
    let e = (params.k * params.t) % field.n() as u64;
    let pe = checked_order(params.p, e as usize, u64::MAX).expect("p^e < p^n fits");
    ((pe as u128 + 1) % group as u128) as u64
}

/// Per-field data shared by the linear-algebra engines.
struct Fibers {
    field: FieldSpec,
    /// `x -> x^(p^(kt))`.
    frob_kt: Matrix,
    image: crate::field::LinearizedImage,
}

impl Fibers {
    fn new(params: &CurveParams, field: FieldSpec) -> Self {
        let frob_kt = field.frobenius_matrix(params.k * params.t);
        let image = field.linearized_image(params.k, Sign::Plus);
        Fibers { field, frob_kt, image }
    }

    fn kernel_size(&self) -> u64 {
        (self.field.p() as u64).pow(self.image.kernel_dim() as u32)
    }
}

/// Exhaustive count over all pairs `(x, y)`.
pub fn count_brute(params: &CurveParams, n: u64, budgets: &Budgets) -> Result<CountRecord> {
    count_brute_with(params, n, budgets, Exec::default())
}

pub fn count_brute_with(params: &CurveParams, n: u64, budgets: &Budgets, exec: Exec) -> Result<CountRecord> {
    checked_order(params.p, 2 * n as usize, budgets.brute)
        .ok_or_else(|| budget_error("brute-force pairs p^(2n)", format!("{}^{}", params.p, 2 * n), budgets.brute))?;
    count_brute_in(params, &build_field(params.p, n as usize)?, exec)
}

/// Brute-force count over a caller-chosen model of F_{p^n} (no budget check).
pub fn count_brute_in(params: &CurveParams, field: &FieldSpec, exec: Exec) -> Result<CountRecord> {
    if field.p() != params.p {
        return Err(Error::MixedFields);
    }
    let n = field.n() as u64;
    let q = field.order();
    let m = params.x_exponent();
    let pk = big_pow(params.p, params.k);
    // Both sides of the equation, indexed by the element they were computed from.
    let rhs: Vec<u64> = (0..q).map(|i| field.index_of(&field.pow_big(&field.from_index(i), &m))).collect();
    let lhs: Vec<u64> = (0..q)
        .map(|i| {
            let y = field.from_index(i);
            field.index_of(&field.add(&field.pow_big(&y, &pk), &y))
        })
        .collect();
    let affine = sum_chunks(exec, 0..q, |xs| {
        xs.map(|x| {
            let r = rhs[x as usize];
            lhs.iter().filter(|&&l| l == r).count() as u64
        })
        .sum()
    });
    Ok(CountRecord::new(*params, n, BigInt::from(affine) + 1, Method::Brute))
}

/// Fiber count: `#{x : x^M in Im L} * |ker L| + 1`.
pub fn count_fiber(params: &CurveParams, n: u64, budgets: &Budgets) -> Result<CountRecord> {
    count_fiber_with(params, n, budgets, Exec::default())
}

pub fn count_fiber_with(params: &CurveParams, n: u64, budgets: &Budgets, exec: Exec) -> Result<CountRecord> {
    checked_order(params.p, n as usize, budgets.enumeration)
        .ok_or_else(|| budget_error("field enumeration p^n", format!("{}^{}", params.p, n), budgets.enumeration))?;
    count_fiber_in(params, build_field(params.p, n as usize)?, budgets, exec)
}

/// Fiber count over a caller-chosen model of F_{p^n}.
pub fn count_fiber_in(params: &CurveParams, field: FieldSpec, budgets: &Budgets, exec: Exec) -> Result<CountRecord> {
    if field.p() != params.p {
        return Err(Error::MixedFields);
    }
    let q = field.order();
    if q > budgets.enumeration {
        return Err(budget_error("field enumeration p^n", q, budgets.enumeration));
    }
    let n = field.n() as u64;
    let fib = Fibers::new(params, field);
    let (p, nn) = (params.p, n as usize);
    let hits = sum_chunks(exec, 0..q, |xs| {
        let mut x = vec![0u32; nn];
        let mut xf = vec![0u32; nn];
        let mut xm = vec![0u32; nn];
        let mut scratch = Vec::with_capacity(2 * nn);
        let mut hits = 0;
        for i in xs {
            crate::field::decode_into(i, p, &mut x);
            fib.frob_kt.apply_into(&x, &mut xf);
            fib.field.mul_into(&xf, &x, &mut xm, &mut scratch);
            if fib.image.contains_coords(&xm) {
                hits += 1;
            }
        }
        hits
    });
    let affine = BigInt::from(hits) * fib.kernel_size();
    Ok(CountRecord::new(*params, n, affine + 1, Method::Fiber))
}

/// Subgroup count: `|ker L| (1 + e #{u in <g^e> : u in Im L}) + 1`.
pub fn count_subgroup(params: &CurveParams, n: u64, budgets: &Budgets) -> Result<CountRecord> {
    count_subgroup_with(params, n, budgets, Exec::default())
}

pub fn count_subgroup_with(params: &CurveParams, n: u64, budgets: &Budgets, exec: Exec) -> Result<CountRecord> {
    count_subgroup_in(params, build_field(params.p, n as usize)?, budgets, exec)
}

/// Subgroup count over a caller-chosen model of F_{p^n}.
pub fn count_subgroup_in(params: &CurveParams, field: FieldSpec, budgets: &Budgets, exec: Exec) -> Result<CountRecord> {
    if field.p() != params.p {
        return Err(Error::MixedFields);
    }
    let n = field.n() as u64;
    let fib = Fibers::new(params, field);
    let field = &fib.field;
    let group = field.order() - 1;
    let e = gcd(exponent_mod_group(params, field), group);
    let order = group / e;
    if order > budgets.subgroup {
        return Err(budget_error("subgroup order (p^n - 1)/e", order, budgets.subgroup));
    }
    let g = field.generator()?;
    let step = field.pow(&g, e);
    let nn = n as usize;
    let hits = sum_chunks(exec, 0..order, |js| {
        let mut cur = field.pow(&step, js.start).coeffs().to_vec();
        let mut next = vec![0u32; nn];
        let mut scratch = Vec::with_capacity(2 * nn);
        let mut hits = 0;
        for _ in js {
            if fib.image.contains_coords(&cur) {
                hits += 1;
            }
            field.mul_into(&cur, step.coeffs(), &mut next, &mut scratch);
            std::mem::swap(&mut cur, &mut next);
        }
        hits
    });
    let affine = BigInt::from(fib.kernel_size()) * (BigInt::from(e) * hits + 1);
    Ok(CountRecord::new(*params, n, affine + 1, Method::Subgroup))
}

/// Dispatches to one of the counting engines.
pub fn count(params: &CurveParams, n: u64, method: Method, budgets: &Budgets) -> Result<CountRecord> {
    if n == 0 {
        return Err(Error::InvalidParameter("extension degree must be at least 1".into()));
    }
    match method {
        Method::Brute => count_brute(params, n, budgets),
        Method::Fiber => count_fiber(params, n, budgets),
        Method::Subgroup => count_subgroup(params, n, budgets),
        Method::Closed => Ok(crate::closed::count_closed(params, n)),
        Method::Formula => {
            Err(Error::InvalidParameter("formula counts come from a named evaluator, not the dispatcher".into()))
        }
    }
}

/// Projective count of `y^(p^k) + sign*y = mu x^m` over F_{p^n}
/// (`mu = 1` when `None`).
pub fn count_artin_schreier(
    p: u32,
    k: u64,
    m: u64,
    sign: Sign,
    mu: Option<&FieldElement>,
    n: u64,
    budgets: &Budgets,
) -> Result<BigInt> {
    checked_order(p, n as usize, budgets.enumeration)
        .ok_or_else(|| budget_error("field enumeration p^n", format!("{p}^{n}"), budgets.enumeration))?;
    let field = build_field(p, n as usize)?;
    count_artin_schreier_in(&field, k, m, sign, mu, budgets, Exec::default())
}

/// As [`count_artin_schreier`], over a caller-supplied field.
pub fn count_artin_schreier_in(
    field: &FieldSpec,
    k: u64,
    m: u64,
    sign: Sign,
    mu: Option<&FieldElement>,
    budgets: &Budgets,
    exec: Exec,
) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::InvalidParameter("exponent m must be at least 1".into()));
    }
    let q = field.order();
    if q > budgets.enumeration {
        return Err(budget_error("field enumeration p^n", q, budgets.enumeration));
    }
    let mu = match mu {
        Some(mu) => {
            if !field.contains(mu) {
                return Err(Error::MixedFields);
            }
            if mu.is_zero() {
                return Err(Error::InvalidParameter("mu must be nonzero".into()));
            }
            mu.clone()
        }
        None => field.one(),
    };
    let image = field.linearized_image(k, sign);
    let kernel = (field.p() as u64).pow(image.kernel_dim() as u32);
    let m_red = if q > 1 { m % (q - 1) } else { 0 };
    let hits = sum_chunks(exec, 0..q, |xs| {
        xs.filter(|&i| {
            let x = field.from_index(i);
            // 0^m = 0 for m >= 1; units use the exponent mod p^n - 1.
            let xm = if x.is_zero() { x } else { field.pow(&x, m_red) };
            image.contains(&field.mul(&mu, &xm))
        })
        .count() as u64
    });
    Ok(BigInt::from(hits) * kernel + 1)
}

/// `N = #{x in F_{p^n} : Tr_{F_{p^n}/F_{p^d}}(mu x^M) = 0}` (with `0^0 = 1`).
pub fn count_trace_form(field: &FieldSpec, d: usize, mu: &FieldElement, m: u64, budgets: &Budgets) -> Result<u64> {
    let n = field.n();
    if d == 0 || !n.is_multiple_of(d) {
        return Err(Error::NotSubfield { d, n });
    }
    if !field.contains(mu) {
        return Err(Error::MixedFields);
    }
    let q = field.order();
    if q > budgets.enumeration {
        return Err(budget_error("field enumeration p^n", q, budgets.enumeration));
    }
    let m_red = if m == 0 {
        0
    } else if q > 1 {
        (m - 1) % (q - 1) + 1
    } else {
        1
    };
    let trace = field.trace_matrix(d)?;
    Ok(sum_chunks(Exec::default(), 0..q, |xs| {
        xs.filter(|&i| {
            let x = field.from_index(i);
            let v = field.mul(mu, &field.pow(&x, m_red));
            trace.apply(v.coeffs()).iter().all(|&c| c == 0)
        })
        .count() as u64
    }))
}

/// Values a zero count of an F_q-quadratic form on F_{q^rel} can take:
/// `q^(rel-1)` or `q^(rel-1) +- (q-1) q^((rel-2+w)/2)` with radical
/// dimension `0 <= w <= rel`, `rel - w` even. `w = rel` is the zero form.
pub fn admissible_quadratic_zero_counts(q: u64, rel: u64) -> Vec<BigInt> {
    let q_big = BigUint::from(q);
    let base = BigInt::from(q_big.pow((rel - 1) as u32));
    let mut out = vec![base.clone()];
    for w in (0..=rel).filter(|w| (rel - w).is_multiple_of(2)) {
        let delta = BigInt::from(q - 1) * BigInt::from(q_big.pow(((rel - 2 + w) / 2) as u32));
        out.push(&base + &delta);
        out.push(&base - &delta);
    }
    out.sort();
    out.dedup();
    out
}

/// Number of points predicted by a trace zero count: `#C = q N + 1`.
pub fn curve_count_from_trace_zeros(q: u64, zeros: u64) -> BigInt {
    BigInt::from(q) * zeros + 1
}

/// Affine points `(x, y)` on `H_{k,t}` over the given field, solved fiber by fiber.
pub fn affine_points(
    params: &CurveParams,
    field: &FieldSpec,
    budgets: &Budgets,
) -> Result<Vec<(FieldElement, FieldElement)>> {
    let q = field.order();
    if q > budgets.enumeration {
        return Err(budget_error("field enumeration p^n", q, budgets.enumeration));
    }
    let frob_kt = field.frobenius_matrix(params.k * params.t);
    let image = field.linearized_image(params.k, Sign::Plus);
    let kernel: Vec<Vec<u32>> = image.map().kernel_basis();
    let p = field.p();
    let kernel_elems: Vec<FieldElement> = (0..(p as u64).pow(kernel.len() as u32))
        .map(|idx| {
            let digits = crate::field::decode(idx, p, kernel.len());
            let mut v = vec![0u32; field.n()];
            for (c, b) in digits.iter().zip(&kernel) {
                for (vi, &bi) in v.iter_mut().zip(b) {
                    *vi = (*vi + crate::field::modp::mul_mod(*c, bi, p)) % p;
                }
            }
            field.from_coeffs(v).expect("kernel vector is reduced")
        })
        .collect();
    let mut out = Vec::new();
    for x in field.elements() {
        let xf = field.from_coeffs(frob_kt.apply(x.coeffs())).expect("reduced");
        let xm = field.mul(&xf, &x);
        if let Some(y0) = image.map().preimage(xm.coeffs()) {
            let y0 = field.from_coeffs(y0).expect("reduced");
            for k in &kernel_elems {
                out.push((x.clone(), field.add(&y0, k)));
            }
        }
    }
    Ok(out)
}

/// `p^n` as `u64`, if it fits.
pub fn field_size(p: u32, n: u64) -> Option<u64> {
    checked_order(p, n as usize, u64::MAX)
}

#[cfg(test)]
mod tests;
