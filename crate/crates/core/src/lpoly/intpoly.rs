//! Dense integer polynomials, constant term first.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

/// Result of dividing over the rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct Division {
    pub quotient: Vec<BigRational>,
    pub remainder: Vec<BigRational>,
}

impl Division {
    pub fn is_exact(&self) -> bool {
        self.remainder.iter().all(Zero::is_zero)
    }

    pub fn quotient_is_integral(&self) -> bool {
        self.quotient.iter().all(BigRational::is_integer)
    }

    /// The quotient when it has integer coefficients.
    pub fn integer_quotient(&self) -> Option<IntPolynomial> {
        if !self.quotient_is_integral() {
            return None;
        }
        Some(IntPolynomial::new(self.quotient.iter().map(|c| c.to_integer()).collect()))
    }
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64s(&[1])
    }

    /// `x^e`.
    pub fn monomial(e: usize) -> Self {
        let mut c = vec![BigInt::zero(); e + 1];
        c[e] = BigInt::one();
        IntPolynomial { coeffs: c }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Long division over Q. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> Division {
        let lead = divisor.coeffs.last().expect("division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let mut rem: Vec<BigRational> = self.coeffs.iter().cloned().map(BigRational::from_integer).collect();
        if rem.len() <= dd {
            return Division { quotient: Vec::new(), remainder: rem };
        }
        let lead = BigRational::from_integer(lead.clone());
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * BigRational::from_integer(d.clone());
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Division { quotient: quot, remainder: rem }
    }

    /// Remainder modulo a monic polynomial, in integers.
    pub fn rem_monic(&self, modulus: &Self) -> Self {
        let dd = modulus.degree().expect("nonzero modulus");
        assert!(modulus.coeffs[dd].is_one(), "modulus must be monic");
        let mut rem = self.coeffs.clone();
        while rem.len() > dd {
            let top = rem.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = rem.len() - dd;
            for (j, m) in modulus.coeffs[..dd].iter().enumerate() {
                rem[shift + j] -= &top * m;
            }
        }
        Self::new(rem)
    }

    /// The `s`-th cyclotomic polynomial.
    pub fn cyclotomic(s: u64) -> Self {
        assert!(s >= 1);
        let mut acc = Self::monomial(s as usize).sub(&Self::one());
        for d in 1..s {
            if s.is_multiple_of(d) {
                let div = acc.div_rem(&Self::cyclotomic(d));
                debug_assert!(div.is_exact());
                acc = div.integer_quotient().expect("monic division stays integral");
            }
        }
        acc
    }

    /// `p`-adic valuation of coefficient `i`; `None` for a zero coefficient.
    pub fn valuation(&self, i: usize, p: u32) -> Option<u64> {
        let mut c = self.coeff(i).abs();
        if c.is_zero() {
            return None;
        }
        let p = BigInt::from(p);
        let mut v = 0;
        loop {
            let (q, r) = c.div_rem(&p);
            if !r.is_zero() {
                return Some(v);
            }
            c = q;
            v += 1;
        }
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "T")?,
                (1, false) => write!(f, "{a}T")?,
                (_, true) => write!(f, "T^{i}")?,
                (_, false) => write!(f, "{a}T^{i}")?,
            }
        }
        Ok(())
    }
}
