//! The curve `H_{k,t} : y^(p^k) + y = x^(p^(kt) + 1)` over F_p and its
//! derived invariants.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::is_prime;

/// `(p, k, t)` identifying `H_{k,t}` over F_p. JSON form `{"p":3,"k":1,"t":1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveParams {
    pub p: u32,
    pub k: u64,
    pub t: u64,
}

/// Degrees over which the curve attains the Hasse-Weil bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalFields {
    pub maximal_over: Option<u64>,
    pub minimal_over: u64,
}

/// `p^e` as a big integer.
pub fn big_pow(p: u32, e: u64) -> BigUint {
    if p == 2 {
        return BigUint::one() << e;
    }
    let e32 = u32::try_from(e).expect("exponent fits in u32");
    BigUint::from(p).pow(e32)
}

impl CurveParams {
    pub fn new(p: u32, k: u64, t: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p >= 1 << 16 {
            return Err(Error::UnsupportedCharacteristic(p as u64));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        Ok(CurveParams { p, k, t })
    }

    /// The Hermitian curve `H_k = H_{k,1}`.
    pub fn hermitian(p: u32, k: u64) -> Result<Self> {
        Self::new(p, k, 1)
    }

    pub fn is_genus_zero(&self) -> bool {
        self.p == 2 && self.t == 0
    }

    /// `p^(kt) (p^k - 1) / 2`, or 0 when `(p, t) = (2, 0)`.
    pub fn genus(&self) -> BigUint {
        if self.is_genus_zero() {
            return BigUint::zero();
        }
        big_pow(self.p, self.k * self.t) * (big_pow(self.p, self.k) - 1u32) / 2u32
    }

    pub fn genus_u64(&self) -> Option<u64> {
        self.genus().to_u64()
    }

    /// Exponent annihilating every normalized Weil ratio: `4kt` for `t >= 1`,
    /// `4k` for `t = 0` with p odd, and 1 for the genus-0 case.
    pub fn reduction_modulus(&self) -> u64 {
        if self.is_genus_zero() {
            1
        } else if self.t == 0 {
            4 * self.k
        } else {
            4 * self.k * self.t
        }
    }

    /// `M = p^(kt) + 1` (equal to 2 when t = 0).
    pub fn x_exponent(&self) -> BigUint {
        big_pow(self.p, self.k * self.t) + 1u32
    }

    pub fn predicted_extremal_fields(&self) -> Result<ExtremalFields> {
        if self.is_genus_zero() {
            return Err(Error::GenusZero);
        }
        let (k, t) = (self.k, self.t);
        Ok(if t == 0 {
            ExtremalFields { maximal_over: Some(2 * k), minimal_over: 4 * k }
        } else if self.p == 2 || t % 2 == 1 {
            ExtremalFields { maximal_over: Some(2 * k * t), minimal_over: 4 * k * t }
        } else {
            ExtremalFields { maximal_over: None, minimal_over: 4 * k * t }
        })
    }

    /// `count - (p^n + 1)`, the signed excess over the projective line.
    pub fn excess(&self, n: u64, count: &BigInt) -> BigInt {
        count - BigInt::from(big_pow(self.p, n) + 1u32)
    }

    /// True iff `count` meets the Hasse-Weil upper bound over F_{p^n}.
    pub fn is_maximal_count(&self, n: u64, count: &BigInt) -> bool {
        self.extremal_match(n, count, 1)
    }

    /// True iff `count` meets the Hasse-Weil lower bound over F_{p^n}.
    pub fn is_minimal_count(&self, n: u64, count: &BigInt) -> bool {
        self.extremal_match(n, count, -1)
    }

    fn extremal_match(&self, n: u64, count: &BigInt, sign: i32) -> bool {
        if n % 2 == 1 {
            // Bound 2g p^(n/2) is irrational unless g = 0.
            return self.is_genus_zero() && *count == BigInt::from(big_pow(self.p, n) + 1u32);
        }
        let bound = BigInt::from(self.genus() * 2u32 * big_pow(self.p, n / 2));
        self.excess(n, count) == bound * sign
    }
}

impl std::fmt::Display for CurveParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "H_{{{},{}}}^({})", self.k, self.t, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_values() {
        let g = |p, k, t| CurveParams::new(p, k, t).unwrap().genus();
        assert_eq!(g(2, 1, 0), BigUint::zero());
        assert_eq!(g(2, 1, 1), BigUint::from(1u32));
        assert_eq!(g(3, 1, 1), BigUint::from(3u32));
        assert_eq!(g(3, 1, 0), BigUint::from(1u32));
        assert_eq!(g(3, 2, 1), BigUint::from(36u32));
        assert_eq!(g(3, 3, 1), BigUint::from(351u32));
        assert_eq!(g(2, 3, 1), BigUint::from(28u32));
    }

    #[test]
    fn reduction_moduli() {
        assert_eq!(CurveParams::new(3, 2, 3).unwrap().reduction_modulus(), 24);
        assert_eq!(CurveParams::new(3, 2, 0).unwrap().reduction_modulus(), 8);
        assert_eq!(CurveParams::new(2, 2, 0).unwrap().reduction_modulus(), 1);
    }

    #[test]
    fn extremal_predictions() {
        let e = |p, k, t| CurveParams::new(p, k, t).unwrap().predicted_extremal_fields();
        assert_eq!(e(3, 1, 1).unwrap(), ExtremalFields { maximal_over: Some(2), minimal_over: 4 });
        assert_eq!(e(3, 1, 2).unwrap(), ExtremalFields { maximal_over: None, minimal_over: 8 });
        assert_eq!(e(2, 2, 1).unwrap(), ExtremalFields { maximal_over: Some(4), minimal_over: 8 });
        assert_eq!(e(2, 1, 0), Err(Error::GenusZero));
    }

    #[test]
    fn rejects_invalid() {
        assert_eq!(CurveParams::new(9, 1, 1), Err(Error::NotPrime(9)));
        assert!(CurveParams::new(3, 0, 1).is_err());
    }

    #[test]
    fn json_form() {
        let c = CurveParams::new(3, 1, 1).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"p":3,"k":1,"t":1}"#);
    }

    #[test]
    fn extremal_count_predicates() {
        let c = CurveParams::new(3, 1, 1).unwrap();
        assert!(c.is_maximal_count(2, &BigInt::from(28)));
        assert!(c.is_minimal_count(4, &BigInt::from(28)));
        assert!(!c.is_maximal_count(4, &BigInt::from(28)));
    }
}
