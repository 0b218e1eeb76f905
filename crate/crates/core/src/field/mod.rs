//! Exact arithmetic in F_{p^n} over an explicit power basis.
//!
//! A field is fixed by its defining modulus, the lexicographically first
//! monic irreducible of degree n (or the r-th one, for representation
//! independence checks). Elements are dense coordinate vectors. The p-power
//! map is a precomputed matrix, so `frobenius` and every p-linearized map
//! are matrix applications.

mod linear;
pub(crate) mod modp;
mod poly;

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use linear::{LinearMap, Matrix, Subspace};
pub use modp::is_prime;

/// Largest field order that element arithmetic accepts (index arithmetic
/// on `p^n - 1` must fit in a u64).
pub const MAX_FIELD_ORDER: u64 = 1 << 62;

/// `+1` or `-1`, the sign in `y^(p^k) +- y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn residue(self, p: u32) -> u32 {
        match self {
            Sign::Plus => 1 % p,
            Sign::Minus => p - 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element of some F_{p^n}; coordinates in the power basis of the modulus root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    tag: u64,
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// JSON dump of a field: `{"p":3,"n":2,"modulus":[1,0,1]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpecDump {
    pub p: u32,
    pub n: usize,
    pub modulus: Vec<u32>,
}

/// The field F_{p^n} with its modulus and precomputed p-power matrix.
#[derive(Debug)]
pub struct FieldSpec {
    p: u32,
    n: usize,
    modulus: Vec<u32>,
    order: u64,
    tag: u64,
    frob: Matrix,
    generator: OnceLock<Result<FieldElement>>,
}

impl Clone for FieldSpec {
    fn clone(&self) -> Self {
        let generator = OnceLock::new();
        if let Some(g) = self.generator.get() {
            let _ = generator.set(g.clone());
        }
        FieldSpec {
            p: self.p,
            n: self.n,
            modulus: self.modulus.clone(),
            order: self.order,
            tag: self.tag,
            frob: self.frob.clone(),
            generator,
        }
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

/// `p^n` if it does not exceed `limit`.
pub fn checked_order(p: u32, n: usize, limit: u64) -> Option<u64> {
    let mut q: u64 = 1;
    for _ in 0..n {
        q = q.checked_mul(p as u64)?;
        if q > limit {
            return None;
        }
    }
    Some(q)
}

fn fingerprint(p: u32, modulus: &[u32]) -> u64 {
    // FNV-1a over (p, modulus)
    let mut h: u64 = 0xcbf29ce484222325;
    for w in std::iter::once(p).chain(modulus.iter().copied()) {
        for b in w.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// Builds F_{p^n} over the lexicographically first monic irreducible of degree n.
pub fn build_field(p: u32, n: usize) -> Result<FieldSpec> {
    FieldSpec::with_modulus_rank(p, n, 0)
}

impl FieldSpec {
    /// Builds F_{p^n} over the `rank`-th monic irreducible of degree n, in
    /// lexicographic order of the coefficient vector read from the top
    /// degree down (rank 0 is the default modulus).
    pub fn with_modulus_rank(p: u32, n: usize, rank: usize) -> Result<Self> {
        if !(2..(1 << 16)).contains(&p) {
            return Err(if is_prime(p as u64) {
                Error::UnsupportedCharacteristic(p as u64)
            } else {
                Error::NotPrime(p as u64)
            });
        }
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("extension degree must be at least 1".into()));
        }
        let order = checked_order(p, n, MAX_FIELD_ORDER).ok_or(Error::FieldTooLarge { p, n })?;
        let mut seen = 0;
        let mut candidate: u64 = 0;
        let modulus = loop {
            if candidate >= order {
                return Err(Error::InvalidParameter(format!(
                    "fewer than {} irreducible polynomials of degree {n} over F_{p}",
                    rank + 1
                )));
            }
            let mut f = decode(candidate, p, n);
            f.push(1);
            if poly::is_irreducible(&f, p) {
                if seen == rank {
                    break f;
                }
                seen += 1;
            }
            candidate += 1;
        };
        Ok(Self::from_modulus_unchecked(p, modulus, order))
    }

    /// Builds the field from an explicit monic irreducible modulus (constant term first).
    pub fn from_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if !(2..(1 << 16)).contains(&p) {
            return Err(Error::UnsupportedCharacteristic(p as u64));
        }
        let n = modulus
            .len()
            .checked_sub(1)
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::InvalidParameter("modulus must have degree at least 1".into()))?;
        if modulus[n] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidParameter("modulus must be monic with reduced coefficients".into()));
        }
        if !poly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidParameter("modulus is reducible".into()));
        }
        let order = checked_order(p, n, MAX_FIELD_ORDER).ok_or(Error::FieldTooLarge { p, n })?;
        Ok(Self::from_modulus_unchecked(p, modulus, order))
    }

    fn from_modulus_unchecked(p: u32, modulus: Vec<u32>, order: u64) -> Self {
        let n = modulus.len() - 1;
        // Column j of the Frobenius matrix is (x^p)^j mod f.
        let mut x = vec![0u32; n];
        if n > 1 {
            x[1] = 1;
        } else {
            // F_p itself: the root of x + c is -c.
            x[0] = (p - modulus[0]) % p;
        }
        let xp = poly::pow_mod_poly(&x, p as u64, &modulus, p);
        let mut columns = Vec::with_capacity(n);
        let mut cur = vec![0u32; n];
        cur[0] = 1;
        for _ in 0..n {
            columns.push(cur.clone());
            cur = poly::mul_mod_poly(&cur, &xp, &modulus, p);
        }
        let frob = Matrix::from_columns(p, &columns);
        let tag = fingerprint(p, &modulus);
        FieldSpec { p, n, modulus, order, tag, frob, generator: OnceLock::new() }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `p^n`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn dump(&self) -> FieldSpecDump {
        FieldSpecDump { p: self.p, n: self.n, modulus: self.modulus.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.dump()).expect("field dump serializes")
    }

    fn wrap(&self, coeffs: Vec<u32>) -> FieldElement {
        FieldElement { tag: self.tag, coeffs }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(vec![0; self.n])
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Image of an integer under Z -> F_p -> F_{p^n}.
    pub fn from_int(&self, v: i64) -> FieldElement {
        let mut c = vec![0; self.n];
        c[0] = v.rem_euclid(self.p as i64) as u32;
        self.wrap(c)
    }

    /// The class of `x` in F_p[x]/(modulus).
    pub fn root(&self) -> FieldElement {
        let mut c = vec![0; self.n];
        if self.n > 1 {
            c[1] = 1;
        } else {
            c[0] = (self.p - self.modulus[0]) % self.p;
        }
        self.wrap(c)
    }

    pub fn from_coeffs(&self, coeffs: Vec<u32>) -> Result<FieldElement> {
        if coeffs.len() != self.n || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidParameter(format!("element needs {} coordinates in [0, {})", self.n, self.p)));
        }
        Ok(self.wrap(coeffs))
    }

    /// Element with index `sum c_i p^i`; indices run over `0..p^n`.
    pub fn from_index(&self, index: u64) -> FieldElement {
        debug_assert!(index < self.order);
        self.wrap(decode(index, self.p, self.n))
    }

    pub fn index_of(&self, a: &FieldElement) -> u64 {
        encode(&a.coeffs, self.p)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(|i| self.from_index(i))
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        a.tag == self.tag && a.coeffs.len() == self.n
    }

    fn check(&self, a: &FieldElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p;
        self.wrap(a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + y) % p).collect())
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p;
        self.wrap(a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + p - y) % p).collect())
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let p = self.p;
        self.wrap(a.coeffs.iter().map(|&x| (p - x) % p).collect())
    }

    pub fn scale(&self, a: &FieldElement, c: u32) -> FieldElement {
        let p = self.p;
        self.wrap(a.coeffs.iter().map(|&x| modp::mul_mod(x, c % p, p)).collect())
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut out = vec![0; self.n];
        let mut scratch = Vec::new();
        self.mul_into(&a.coeffs, &b.coeffs, &mut out, &mut scratch);
        self.wrap(out)
    }

    /// Coordinate-level product for hot loops: `out = a * b`.
    pub fn mul_into(&self, a: &[u32], b: &[u32], out: &mut [u32], scratch: &mut Vec<u64>) {
        let n = self.n;
        let p = self.p as u64;
        scratch.clear();
        scratch.resize(2 * n - 1, 0);
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let ai = ai as u64;
            for (j, &bj) in b.iter().enumerate() {
                scratch[i + j] += ai * bj as u64;
            }
            // p < 2^16 so each term is < 2^32; at most n <= 62 terms accumulate.
        }
        for top in (n..2 * n - 1).rev() {
            let c = scratch[top] % p;
            if c == 0 {
                continue;
            }
            let base = top - n;
            for j in 0..n {
                let m = self.modulus[j] as u64;
                if m != 0 {
                    scratch[base + j] += c * (p - m);
                }
            }
        }
        for (o, &s) in out.iter_mut().zip(scratch.iter()) {
            *o = (s % p) as u32;
        }
    }

    pub fn pow(&self, a: &FieldElement, e: u64) -> FieldElement {
        let mut result = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// `a^e` for an arbitrarily large exponent (reduced mod `p^n - 1` for units).
    pub fn pow_big(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        if e.is_zero() {
            return self.one();
        }
        if a.is_zero() {
            return self.zero();
        }
        let reduced = (e % BigUint::from(self.order - 1)).to_u64().expect("reduced exponent fits");
        self.pow(a, reduced)
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order - 2))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Checked binary arithmetic.
    pub fn arith(&self, a: &FieldElement, b: &FieldElement, kind: ArithKind) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(match kind {
            ArithKind::Add => self.add(a, b),
            ArithKind::Sub => self.sub(a, b),
            ArithKind::Mul => self.mul(a, b),
            ArithKind::Div => self.div(a, b)?,
        })
    }

    /// The matrix of `y -> y^(p^e)` on coordinates.
    pub fn frobenius_matrix(&self, e: u64) -> Matrix {
        self.frob.pow(e % self.n as u64)
    }

    /// `a^(p^e)`, applying the p-power matrix `e mod n` times.
    pub fn frobenius(&self, a: &FieldElement, e: u64) -> FieldElement {
        let mut cur = a.coeffs.clone();
        let mut next = vec![0; self.n];
        for _ in 0..(e % self.n as u64) {
            self.frob.apply_into(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        self.wrap(cur)
    }

    /// `Tr_{F_{p^n}/F_{p^d}}(a) = sum_{i < n/d} a^(p^(d i))`.
    pub fn trace(&self, a: &FieldElement, d: usize) -> Result<FieldElement> {
        if d == 0 || !self.n.is_multiple_of(d) {
            return Err(Error::NotSubfield { d, n: self.n });
        }
        let step = self.frobenius_matrix(d as u64);
        let mut acc = a.clone();
        let mut cur = a.coeffs.clone();
        let mut next = vec![0; self.n];
        for _ in 1..self.n / d {
            step.apply_into(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
            acc = self.add(&acc, &self.wrap(cur.clone()));
        }
        Ok(acc)
    }

    /// The F_p-matrix of `Tr_{F_{p^n}/F_{p^d}}`.
    pub fn trace_matrix(&self, d: usize) -> Result<Matrix> {
        if d == 0 || !self.n.is_multiple_of(d) {
            return Err(Error::NotSubfield { d, n: self.n });
        }
        let step = self.frobenius_matrix(d as u64);
        let mut power = Matrix::identity(self.p, self.n);
        let mut acc = Matrix::zero(self.p, self.n, self.n);
        for _ in 0..self.n / d {
            acc = acc.add(&power);
            power = power.mul(&step);
        }
        Ok(acc)
    }

    /// True iff `a` lies in the subfield F_{p^d}.
    pub fn in_subfield(&self, a: &FieldElement, d: usize) -> bool {
        self.frobenius(a, d as u64) == *a
    }

    /// Multiplicative order of a unit.
    pub fn multiplicative_order(&self, a: &FieldElement) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let group = self.order - 1;
        let mut ord = group;
        for (l, _) in num_prime::nt_funcs::factorize64(group) {
            while ord.is_multiple_of(l) && self.pow(a, ord / l) == self.one() {
                ord /= l;
            }
        }
        Ok(ord)
    }

    /// The first element, in index order, of multiplicative order `p^n - 1`.
    pub fn generator(&self) -> Result<FieldElement> {
        self.generator.get_or_init(|| self.search_generator()).clone()
    }

    fn search_generator(&self) -> Result<FieldElement> {
        let group = self.order - 1;
        if group == 1 {
            return Ok(self.one());
        }
        let primes: Vec<u64> = num_prime::nt_funcs::factorize64(group).into_keys().collect();
        let one = self.one();
        (1..self.order)
            .map(|i| self.from_index(i))
            .find(|g| primes.iter().all(|&l| self.pow(g, group / l) != one))
            .ok_or_else(|| Error::Inconsistent("no generator found".into()))
    }

    /// The F_p-linear map `y -> y^(p^k) + sign * y`.
    pub fn linearized_matrix(&self, k: u64, sign: Sign) -> Matrix {
        self.frobenius_matrix(k).add_scaled_identity(sign.residue(self.p))
    }

    /// `{ y^(p^k) + sign * y : y in F_{p^n} }` as an explicit subspace.
    pub fn linearized_image(&self, k: u64, sign: Sign) -> LinearizedImage {
        let matrix = self.linearized_matrix(k, sign);
        let map = LinearMap::new(&matrix);
        let columns: Vec<Vec<u32>> = (0..self.n).map(|j| matrix.column(j)).collect();
        let span = Subspace::span(self.p, self.n, &columns);
        LinearizedImage { tag: self.tag, map, span }
    }
}

/// Image of a p-linearized map, with its kernel dimension.
#[derive(Debug, Clone)]
pub struct LinearizedImage {
    tag: u64,
    map: LinearMap,
    span: Subspace,
}

impl LinearizedImage {
    pub fn contains(&self, a: &FieldElement) -> bool {
        a.tag == self.tag && self.map.image_contains(&a.coeffs)
    }

    pub fn contains_coords(&self, coords: &[u32]) -> bool {
        self.map.image_contains(coords)
    }

    /// `dim_{F_p}` of the image.
    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn kernel_dim(&self) -> usize {
        self.map.kernel_dim()
    }

    /// Canonical basis; equal bases iff equal sets.
    pub fn subspace(&self) -> &Subspace {
        &self.span
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }
}

#[inline]
pub(crate) fn decode(mut index: u64, p: u32, n: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push((index % p as u64) as u32);
        index /= p as u64;
    }
    out
}

#[inline]
pub(crate) fn decode_into(mut index: u64, p: u32, out: &mut [u32]) {
    for o in out.iter_mut() {
        *o = (index % p as u64) as u32;
        index /= p as u64;
    }
}

#[inline]
pub(crate) fn encode(coeffs: &[u32], p: u32) -> u64 {
    coeffs.iter().rev().fold(0u64, |acc, &c| acc * p as u64 + c as u64)
}

/// `gcd(a, b)` on u64.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
