//! Explicit maps between the curves and the maximal quotients
//! `y^(p^k) +- y = mu x^m`, checked point by point on enumerable fields.
//!
//! * `map_down`: `H_{k,t} -> H_k`, `(x, y) -> (x^((p^(kt)+1)/(p^k+1)), y)`, for odd `t`.
//! * `map_up`: `H_{kt} -> H_{k,t}`, `(x, y) -> (x, sum_{i<t} (-1)^i y^(p^(ki)))`,
//!   for odd `t` or `p = 2` (where the signs vanish).
//!
//! Points at infinity are not mapped.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::Serialize;

use crate::counting::{affine_points, count_artin_schreier_in, Budgets};
use crate::curve::{big_pow, CurveParams};
use crate::error::{Error, Result};
use crate::field::{build_field, checked_order, FieldElement, FieldSpec, Sign};
use crate::par::{map_ordered, Exec};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffinePoint {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl AffinePoint {
    pub fn new(x: FieldElement, y: FieldElement) -> Self {
        AffinePoint { x, y }
    }
}

/// `y^(p^k) + y == x^(p^(kt) + 1)`, by square-and-multiply.
pub fn on_curve(params: &CurveParams, field: &FieldSpec, pt: &AffinePoint) -> bool {
    let lhs = field.add(&field.pow_big(&pt.y, &big_pow(params.p, params.k)), &pt.y);
    lhs == field.pow_big(&pt.x, &params.x_exponent())
}

/// `(p^(kt) + 1) / (p^k + 1)`, defined for odd `t`.
pub fn map_down_exponent(params: &CurveParams) -> Result<BigUint> {
    if params.t.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "map_down needs odd t, got t = {}: p^k + 1 does not divide p^(kt) + 1",
            params.t
        )));
    }
    Ok(params.x_exponent() / (big_pow(params.p, params.k) + 1u32))
}

/// Target of `map_down`: `H_k`.
pub fn map_down_target(params: &CurveParams) -> CurveParams {
    CurveParams { t: 1, ..*params }
}

/// Source of `map_up`: `H_{kt}`.
pub fn map_up_source(params: &CurveParams) -> Result<CurveParams> {
    if params.t == 0 {
        return Err(Error::InvalidParameter("map_up needs t >= 1".into()));
    }
    if params.p != 2 && params.t.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "map_up needs odd t when p is odd, got p = {}, t = {}",
            params.p, params.t
        )));
    }
    CurveParams::hermitian(params.p, params.k * params.t)
}

/// Image of a point of `H_{k,t}` on `H_k`.
pub fn map_down(pt: &AffinePoint, params: &CurveParams, field: &FieldSpec) -> Result<AffinePoint> {
    let e = map_down_exponent(params)?;
    Ok(AffinePoint::new(field.pow_big(&pt.x, &e), pt.y.clone()))
}

/// Image of a point of `H_{kt}` on `H_{k,t}`.
pub fn map_up(pt: &AffinePoint, params: &CurveParams, field: &FieldSpec) -> Result<AffinePoint> {
    map_up_source(params)?;
    let mut acc = field.zero();
    let mut term = pt.y.clone();
    for i in 0..params.t {
        acc = if i % 2 == 0 { field.add(&acc, &term) } else { field.sub(&acc, &term) };
        term = field.frobenius(&term, params.k);
    }
    Ok(AffinePoint::new(pt.x.clone(), acc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    Down,
    Up,
}

/// Outcome of pushing every affine point of the source through a map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapCheck {
    pub kind: MapKind,
    pub source: CurveParams,
    pub target: CurveParams,
    pub n: u64,
    pub source_points: u64,
    pub mapped_on_target: u64,
    pub image_size: u64,
    pub target_points: u64,
}

impl MapCheck {
    pub fn well_defined(&self) -> bool {
        self.mapped_on_target == self.source_points
    }

    pub fn surjective(&self) -> bool {
        self.image_size == self.target_points
    }
}

fn point_set(field: &FieldSpec, pts: &[(FieldElement, FieldElement)]) -> HashSet<(u64, u64)> {
    pts.iter().map(|(x, y)| (field.index_of(x), field.index_of(y))).collect()
}

fn run_check(
    kind: MapKind,
    source: CurveParams,
    target: CurveParams,
    n: u64,
    budgets: &Budgets,
    exec: Exec,
    f: impl Fn(&AffinePoint, &FieldSpec) -> Result<AffinePoint> + Sync,
) -> Result<MapCheck> {
    let field = build_field(source.p, n as usize)?;
    let src = affine_points(&source, &field, budgets)?;
    let tgt = point_set(&field, &affine_points(&target, &field, budgets)?);
    let images: Vec<Result<(AffinePoint, bool)>> = map_ordered(exec, &src, |(x, y)| {
        let pt = AffinePoint::new(x.clone(), y.clone());
        debug_assert!(on_curve(&source, &field, &pt));
        let img = f(&pt, &field)?;
        let ok = on_curve(&target, &field, &img);
        Ok((img, ok))
    });
    let mut on_target = 0;
    let mut image = HashSet::new();
    for r in images {
        let (img, ok) = r?;
        if ok {
            on_target += 1;
        }
        image.insert((field.index_of(&img.x), field.index_of(&img.y)));
    }
    Ok(MapCheck {
        kind,
        source,
        target,
        n,
        source_points: src.len() as u64,
        mapped_on_target: on_target,
        image_size: image.intersection(&tgt).count() as u64,
        target_points: tgt.len() as u64,
    })
}

/// Pushes every affine point of `H_{k,t}` over F_{p^n} through `map_down`.
pub fn check_map_down(params: &CurveParams, n: u64, budgets: &Budgets, exec: Exec) -> Result<MapCheck> {
    map_down_exponent(params)?;
    let target = map_down_target(params);
    run_check(MapKind::Down, *params, target, n, budgets, exec, |pt, field| map_down(pt, params, field))
}

/// Pushes every affine point of `H_{kt}` over F_{p^n} through `map_up`.
pub fn check_map_up(params: &CurveParams, n: u64, budgets: &Budgets, exec: Exec) -> Result<MapCheck> {
    let source = map_up_source(params)?;
    run_check(MapKind::Up, source, *params, n, budgets, exec, |pt, field| map_up(pt, params, field))
}

/// Count of a quotient curve against the Hasse-Weil upper bound over F_{p^(2kt)}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientCheck {
    pub p: u32,
    pub k: u64,
    pub t: u64,
    pub m: u64,
    pub twisted: bool,
    pub genus: u64,
    #[serde(serialize_with = "crate::counting::ser_bigint")]
    pub count: BigInt,
    #[serde(serialize_with = "crate::counting::ser_bigint")]
    pub bound: BigInt,
}

impl QuotientCheck {
    pub fn maximal(&self) -> bool {
        self.count == self.bound
    }
}

/// A nonzero root of `x^(p^k) + x` in F_{p^n}, the first in index order.
pub fn twist_constant(field: &FieldSpec, k: u64) -> Result<FieldElement> {
    let basis = field.linearized_image(k, Sign::Plus).map().kernel_basis();
    let mut roots: Vec<FieldElement> = basis.into_iter().map(|v| field.from_coeffs(v).expect("reduced")).collect();
    roots.sort_by_key(|r| field.index_of(r));
    roots.into_iter().next().ok_or_else(|| {
        Error::InvalidParameter(format!("x^(p^{k}) + x has no nonzero root in F_{}^{}", field.p(), field.n()))
    })
}

/// Counts `y^(p^k) + y = x^m` (or `y^(p^k) - y = mu x^m` with `mu^(p^k) = -mu`
/// when `twisted`) over F_{p^(2kt)} and compares with `p^(2kt) + 1 + 2 g p^(kt)`,
/// `g = (p^k - 1)(m - 1)/2`.
pub fn check_quotient_maximality(
    p: u32,
    k: u64,
    t: u64,
    m: u64,
    twisted: bool,
    budgets: &Budgets,
) -> Result<QuotientCheck> {
    let params = CurveParams::new(p, k, t)?;
    if t == 0 || (p != 2 && t.is_multiple_of(2)) {
        return Err(Error::InvalidParameter(format!("t must be positive, and odd when p is odd; got t = {t}")));
    }
    let modulus = params.x_exponent();
    if m < 2 || &modulus % m != BigUint::from(0u32) {
        return Err(Error::InvalidParameter(format!("m = {m} must be at least 2 and divide p^(kt) + 1 = {modulus}")));
    }
    let n = 2 * k * t;
    checked_order(p, n as usize, budgets.enumeration).ok_or_else(|| Error::BudgetExceeded {
        what: "field enumeration p^n",
        needed: format!("{p}^{n}"),
        budget: budgets.enumeration,
    })?;
    let field = build_field(p, n as usize)?;
    let count = if twisted {
        let mu = twist_constant(&field, k)?;
        count_artin_schreier_in(&field, k, m, Sign::Minus, Some(&mu), budgets, Exec::default())?
    } else {
        count_artin_schreier_in(&field, k, m, Sign::Plus, None, budgets, Exec::default())?
    };
    let genus = ((p as u64).pow(k as u32) - 1) * (m - 1) / 2;
    let bound = BigInt::from(big_pow(p, n)) + BigInt::one() + BigInt::from(2 * genus) * BigInt::from(big_pow(p, k * t));
    Ok(QuotientCheck { p, k, t, m, twisted, genus, count, bound })
}

/// Divisors `m >= 2` of `p^(kt) + 1` up to `limit`.
pub fn quotient_exponents(params: &CurveParams, limit: u64) -> Vec<u64> {
    let modulus = params.x_exponent();
    (2..=limit).filter(|&m| &modulus % m == BigUint::from(0u32)).collect()
}

#[cfg(test)]
mod tests;
