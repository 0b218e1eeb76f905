//! L-polynomials from point counts, and divisibility between them.
//!
//! Counts become power sums `P_n = q^n + 1 - #C(F_{q^n})` of the reciprocal
//! roots, and Newton's identities turn those into the coefficients of
//! `L(T) = prod (1 - eta_i T)`, exactly and with each division checked.

mod intpoly;
mod spectrum;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::closed::count_closed;
use crate::curve::CurveParams;
use crate::error::{Error, Result};

pub use intpoly::{Division, IntPolynomial};
pub use spectrum::{
    minimal_period, reconstruct_deviation, signed_spectrum, signed_u_coefficients, u_coefficients, weil_spectrum,
    weil_spectrum_from_deviations, WeilSpectrum,
};

/// Largest genus `lpoly_of` will expand.
pub const MAX_GENUS: u64 = 4096;

/// An L-polynomial of a genus-`g` curve over F_q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    pub q: BigUint,
    pub genus: u64,
    pub poly: IntPolynomial,
}

impl Serialize for LPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LPolynomial", 3)?;
        st.serialize_field("q", &self.q.to_string())?;
        st.serialize_field("genus", &self.genus)?;
        let coeffs: Vec<String> = (0..=2 * self.genus as usize).map(|i| self.poly.coeff(i).to_string()).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl LPolynomial {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// `c_{2g-i} = q^(g-i) c_i` for every `i`, with `c_0 = 1`.
    pub fn check_functional_equation(&self) -> Result<()> {
        let g = self.genus as usize;
        if self.poly.coeff(0) != BigInt::one() {
            return Err(Error::Validation(format!("constant term is {}, expected 1", self.poly.coeff(0))));
        }
        if self.poly.degree().unwrap_or(0) > 2 * g {
            return Err(Error::Validation(format!("degree exceeds 2g = {}", 2 * g)));
        }
        let q = BigInt::from(self.q.clone());
        let mut qpow = BigInt::one();
        for i in (0..=g).rev() {
            // qpow = q^(g - i)
            let lhs = self.poly.coeff(2 * g - i);
            let rhs = &qpow * self.poly.coeff(i);
            if lhs != rhs {
                return Err(Error::Validation(format!("c_{} = {lhs} but q^{} c_{i} = {rhs}", 2 * g - i, g - i)));
            }
            qpow *= &q;
        }
        Ok(())
    }

    /// Power sums `P_1..P_n_max` of the reciprocal roots.
    pub fn power_sums(&self, n_max: usize) -> Vec<BigInt> {
        // e_i = (-1)^i c_i
        let e: Vec<BigInt> =
            (0..=n_max).map(|i| if i % 2 == 0 { self.poly.coeff(i) } else { -self.poly.coeff(i) }).collect();
        let mut p: Vec<BigInt> = vec![BigInt::zero(); n_max + 1];
        for n in 1..=n_max {
            let mut acc = BigInt::from(n) * &e[n];
            if n % 2 == 0 {
                acc = -acc;
            }
            for j in 1..n {
                let term = &e[j] * &p[n - j];
                if j % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            p[n] = acc;
        }
        p.remove(0);
        p
    }

    /// Counts over F_{q^n} for `n = 1..=n_max` implied by the polynomial.
    pub fn counts(&self, n_max: usize) -> Vec<BigInt> {
        let q = BigInt::from(self.q.clone());
        let mut qn = BigInt::one();
        self.power_sums(n_max)
            .into_iter()
            .map(|p| {
                qn *= &q;
                &qn + 1 - p
            })
            .collect()
    }
}

fn within_hasse_weil(q: &BigInt, g: u64, n: usize, excess: &BigInt) -> bool {
    // excess^2 <= 4 g^2 q^n
    let bound = BigInt::from(4u64) * BigInt::from(g) * BigInt::from(g) * q.pow(n as u32);
    excess * excess <= bound
}

/// Builds the L-polynomial from counts over F_{q^n}, `n = 1..=2g`.
pub fn lpoly_from_counts(q: &BigUint, genus: u64, counts: &[BigInt]) -> Result<LPolynomial> {
    let g2 = 2 * genus as usize;
    if counts.len() != g2 {
        return Err(Error::InvalidParameter(format!("need {g2} counts, got {}", counts.len())));
    }
    let qi = BigInt::from(q.clone());
    let mut qn = BigInt::one();
    let mut power_sums = Vec::with_capacity(g2);
    for (i, c) in counts.iter().enumerate() {
        qn *= &qi;
        let excess = c - &qn - 1;
        if !within_hasse_weil(&qi, genus, i + 1, &excess) {
            return Err(Error::Validation(format!("count {c} at degree {} violates Hasse-Weil", i + 1)));
        }
        power_sums.push(-excess);
    }
    // i e_i = sum_{j=1}^{i} (-1)^(j-1) e_{i-j} P_j
    let mut e: Vec<BigInt> = Vec::with_capacity(g2 + 1);
    e.push(BigInt::one());
    for i in 1..=g2 {
        let mut acc = BigInt::zero();
        for j in 1..=i {
            let term = &e[i - j] * &power_sums[j - 1];
            if j % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (quo, rem) = acc.div_rem(&BigInt::from(i));
        if !rem.is_zero() {
            return Err(Error::Inconsistent(format!("coefficient {i} is not an integer; the counts are inconsistent")));
        }
        e.push(quo);
    }
    let coeffs: Vec<BigInt> = e.into_iter().enumerate().map(|(i, v)| if i % 2 == 0 { v } else { -v }).collect();
    let lp = LPolynomial { q: q.clone(), genus, poly: IntPolynomial::new(coeffs) };
    let top = lp.poly.coeff(g2);
    if top != qi.pow(genus as u32) {
        return Err(Error::Validation(format!("leading coefficient {top} is not q^g")));
    }
    lp.check_functional_equation()?;
    Ok(lp)
}

/// L-polynomial of `H_{k,t}` over F_p from closed-form counts.
pub fn lpoly_of(params: &CurveParams) -> Result<LPolynomial> {
    let genus = params.genus_u64().filter(|&g| g <= MAX_GENUS).ok_or_else(|| Error::BudgetExceeded {
        what: "genus",
        needed: params.genus().to_string(),
        budget: MAX_GENUS,
    })?;
    let counts: Vec<BigInt> = (1..=2 * genus).map(|n| count_closed(params, n).count).collect();
    lpoly_from_counts(&BigUint::from(params.p), genus, &counts)
}

/// `ord_p(c_i) >= i r / 2` for every nonzero `c_i`, `i >= 1`.
pub fn is_supersingular_lpoly(l: &IntPolynomial, p: u32, r: u64) -> bool {
    (1..l.coeffs().len()).all(|i| match l.valuation(i, p) {
        None => true,
        Some(v) => 2 * v >= i as u64 * r,
    })
}

/// Exact divisibility over Q. The zero polynomial divides only itself.
pub fn divides(a: &IntPolynomial, b: &IntPolynomial) -> bool {
    if a.is_zero() {
        return b.is_zero();
    }
    b.div_rem(a).is_exact()
}

/// Long division of `b` by `a` with the quotient's integrality recorded.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisibilityReport {
    pub divides: bool,
    pub quotient_integral: bool,
    pub quotient: Option<IntPolynomial>,
    pub degree_gap: i64,
}

pub fn divisibility(a: &IntPolynomial, b: &IntPolynomial) -> Result<DivisibilityReport> {
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let d = b.div_rem(a);
    let exact = d.is_exact();
    let gap = b.degree().map_or(-1, |x| x as i64) - a.degree().unwrap_or(0) as i64;
    Ok(DivisibilityReport {
        divides: exact,
        quotient_integral: d.quotient_is_integral(),
        quotient: if exact { d.integer_quotient() } else { None },
        degree_gap: gap,
    })
}
