//! Weil spectra: multiplicities of the Weil numbers `sqrt(p) * zeta_s^j`.
//!
//! The normalized deviations `T_n` are the power sums of the unit-circle
//! ratios, so an inverse DFT over `n = 1..s` recovers the multiplicities.
//! The transform runs in floating point; the rounded result is then checked
//! exactly in `Z[zeta_s] = Z[x] / Phi_s`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::IntPolynomial;
use crate::closed::closed_deviation;
use crate::curve::CurveParams;
use crate::error::{Error, Result};

const ROUNDING_TOLERANCE: f64 = 1e-6;

/// JSON form `{"s":4,"p":3,"m":[0,3,0,3]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilSpectrum {
    pub s: u64,
    pub p: u32,
    pub m: Vec<u64>,
}

impl WeilSpectrum {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// `sum m_j`, which is `2g`.
    pub fn total(&self) -> u64 {
        self.m.iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        let s = self.s as usize;
        (0..s).all(|j| self.m[j] == self.m[(s - j) % s])
    }

    /// The same multiset of ratios indexed by `s_new`-th roots of unity.
    pub fn lift(&self, s_new: u64) -> Result<WeilSpectrum> {
        if !s_new.is_multiple_of(self.s) {
            return Err(Error::InvalidParameter(format!("{} does not divide {s_new}", self.s)));
        }
        let f = (s_new / self.s) as usize;
        let mut m = vec![0; s_new as usize];
        for (j, &v) in self.m.iter().enumerate() {
            m[j * f] = v;
        }
        Ok(WeilSpectrum { s: s_new, p: self.p, m })
    }

    /// Multiplicity-wise `self <= other` on a common modulus.
    pub fn is_dominated_by(&self, other: &WeilSpectrum) -> Result<bool> {
        let s = self.s.lcm(&other.s);
        let (a, b) = (self.lift(s)?, other.lift(s)?);
        Ok(a.m.iter().zip(&b.m).all(|(x, y)| x <= y))
    }
}

/// `sum_j m_j zeta_s^(jn)` reduced into `Z[x] / Phi_s`.
pub fn reconstruct_deviation(spec: &WeilSpectrum, n: u64) -> IntPolynomial {
    let m: Vec<i64> = spec.m.iter().map(|&v| v as i64).collect();
    reconstruct(&m, spec.s, n)
}

fn reconstruct(m: &[i64], s: u64, n: u64) -> IntPolynomial {
    let mut coeffs = vec![BigInt::zero(); s as usize];
    for (j, &v) in m.iter().enumerate() {
        coeffs[((j as u64 * n) % s) as usize] += v;
    }
    IntPolynomial::new(coeffs).rem_monic(&IntPolynomial::cyclotomic(s))
}

fn inverse_dft(values: &[BigInt], s: u64) -> Result<Vec<i64>> {
    // values[n - 1] = V_n for n = 1..s; V_s stands in for V_0.
    let vs: Vec<f64> = values.iter().map(|v| v.to_f64().expect("finite")).collect();
    let sf = s as f64;
    let mut out = Vec::with_capacity(s as usize);
    let mut worst = 0f64;
    for j in 0..s {
        let mut acc = Complex64::zero();
        for (i, &v) in vs.iter().enumerate() {
            let n = (i as u64 + 1) % s;
            let angle = -2.0 * std::f64::consts::PI * ((j * n) % s) as f64 / sf;
            acc += Complex64::from_polar(v, angle);
        }
        acc /= sf;
        let r = acc.re.round();
        worst = worst.max((acc.re - r).abs()).max(acc.im.abs());
        out.push(r as i64);
    }
    if worst > ROUNDING_TOLERANCE {
        return Err(Error::SpectrumRounding { residual: worst });
    }
    Ok(out)
}

/// Signed multiplicities of period-`s` deviations `dev(n)`, checked exactly for `n = 1..=2s`.
pub fn signed_spectrum(s: u64, dev: impl Fn(u64) -> BigInt) -> Result<Vec<i64>> {
    let values: Vec<BigInt> = (1..=s).map(&dev).collect();
    let m = inverse_dft(&values, s)?;
    let phi = IntPolynomial::cyclotomic(s);
    for n in 1..=2 * s {
        let diff = reconstruct(&m, s, n).sub(&IntPolynomial::new(vec![dev(n)]));
        if !diff.rem_monic(&phi).is_zero() {
            return Err(Error::ReconstructionMismatch { n });
        }
    }
    Ok(m)
}

fn nonnegative(m: Vec<i64>) -> Result<Vec<u64>> {
    m.into_iter()
        .enumerate()
        .map(|(index, value)| u64::try_from(value).map_err(|_| Error::NegativeMultiplicity { index, value }))
        .collect()
}

/// Spectrum of period-`s` deviations given by `dev(n)`.
pub fn weil_spectrum_from_deviations(p: u32, s: u64, dev: impl Fn(u64) -> BigInt) -> Result<WeilSpectrum> {
    let m = nonnegative(signed_spectrum(s, dev)?)?;
    Ok(WeilSpectrum { s, p, m })
}

/// Weil spectrum of `H_{k,t}` over F_p, from closed-form deviations.
pub fn weil_spectrum(params: &CurveParams) -> Result<WeilSpectrum> {
    let s = params.reduction_modulus();
    for n in (1..=s).step_by(2) {
        if !closed_deviation(params, n).value.is_zero() {
            return Err(Error::Inconsistent(format!("nonzero deviation at odd degree {n}")));
        }
    }
    weil_spectrum_from_deviations(params.p, s, |n| closed_deviation(params, n).value)
}

/// `U_n = T_n(H_2k) - T_n(H_k)` over `n = 1..8k` transformed to signed
/// multiplicities on `8k`-th roots of unity, with `U_8k` used as `U_0`.
pub fn signed_u_coefficients(p: u32, k: u64) -> Result<Vec<i64>> {
    let small = CurveParams::hermitian(p, k)?;
    let big = CurveParams::hermitian(p, 2 * k)?;
    signed_spectrum(8 * k, |n| closed_deviation(&big, n).value - closed_deviation(&small, n).value)
}

/// The multiplicities `u_j` of `L(H_2k) / L(H_k)`; a negative one is an error.
pub fn u_coefficients(p: u32, k: u64) -> Result<Vec<u64>> {
    nonnegative(signed_u_coefficients(p, k)?)
}

/// Smallest `s' | s` such that every ratio with nonzero multiplicity is an `s'`-th root of unity.
pub fn minimal_period(spec: &WeilSpectrum) -> u64 {
    let s = spec.s;
    (1..=s)
        .filter(|d| s.is_multiple_of(*d))
        .find(|d| {
            let step = (s / d) as usize;
            spec.m.iter().enumerate().all(|(j, &v)| v == 0 || j % step == 0)
        })
        .unwrap_or(s)
}
