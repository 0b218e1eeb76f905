//! Dense polynomials over F_p, constant term first. Only what the modulus
//! search needs: products and powers modulo a monic polynomial, and gcd.

use super::modp::{inv_mod, mul_mod};

pub(crate) fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// `a * b mod f` for a monic `f` of degree `n >= 1`, with `deg a, deg b < n`.
pub(crate) fn mul_mod_poly(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let n = f.len() - 1;
    let p64 = p as u64;
    let mut acc = vec![0u64; (a.len() + b.len()).max(1)];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            acc[i + j] = (acc[i + j] + ai as u64 * bj as u64) % p64;
        }
    }
    for top in (n..acc.len()).rev() {
        let c = acc[top] % p64;
        if c == 0 {
            continue;
        }
        acc[top] = 0;
        for j in 0..n {
            // x^top = -sum f_j x^(top-n+j)
            let sub = c * f[j] as u64 % p64;
            acc[top - n + j] = (acc[top - n + j] + p64 - sub) % p64;
        }
    }
    let mut out: Vec<u32> = acc.into_iter().take(n).map(|v| (v % p64) as u32).collect();
    out.resize(n, 0);
    out
}

pub(crate) fn pow_mod_poly(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let n = f.len() - 1;
    let mut result = vec![0u32; n];
    result[0] = 1 % p;
    let mut b = base.to_vec();
    b.resize(n, 0);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod_poly(&result, &b, f, p);
        }
        e >>= 1;
        if e > 0 {
            b = mul_mod_poly(&b, &b, f, p);
        }
    }
    result
}

/// Remainder of `a` modulo a nonzero `b`.
fn rem_poly(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = mul_mod(r[dr], lead_inv, p);
        for j in 0..=db {
            let sub = mul_mod(c, b[j], p);
            r[dr - db + j] = (r[dr - db + j] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

/// Monic gcd; the zero polynomial is returned as an empty vector.
pub(crate) fn gcd_poly(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem_poly(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = inv_mod(lead, p);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: a monic `f` of degree n is irreducible over F_p iff
/// `x^(p^n) = x mod f` and `gcd(x^(p^(n/l)) - x, f) = 1` for every prime `l | n`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    let mut x = vec![0u32; n];
    x[1] = 1;
    // powers[j] = x^(p^j) mod f
    let mut powers = Vec::with_capacity(n + 1);
    powers.push(x.clone());
    for j in 1..=n {
        let next = pow_mod_poly(&powers[j - 1], p as u64, f, p);
        powers.push(next);
    }
    if powers[n] != x {
        return false;
    }
    prime_factors(n as u64).into_iter().all(|l| {
        let h = &powers[n / l as usize];
        let mut diff: Vec<u32> = h.iter().zip(&x).map(|(&a, &b)| (a + p - b) % p).collect();
        trim(&mut diff);
        if diff.is_empty() {
            return false;
        }
        gcd_poly(&diff, f, p).len() == 1
    })
}
