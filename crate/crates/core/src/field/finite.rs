//! Table-driven arithmetic for GF(p) and GF(p^e).
//!
//! Elements are encoded as integers in `[0, q)`: the residue itself for a
//! prime field, and `c0 + c1 p + ... + c_{e-1} p^(e-1)` for the power-basis
//! coefficients of an extension element.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest supported extension field order; multiplication goes through
/// discrete log tables of this size.
pub const MAX_EXT_ORDER: u64 = 1 << 16;
/// Prime fields are reduced in `u64`, so residues must fit in 31 bits.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// If `n = p^e` with `p` prime and `e >= 1`, returns `(p, e)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= n && !n.is_multiple_of(p) {
        p += 1;
    }
    if !n.is_multiple_of(p) {
        // n itself is prime
        return Some((n, 1));
    }
    let mut m = n;
    let mut e = 0;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

// Dense polynomials over GF(p), coefficients low-to-high, trailing zeros trimmed.

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(a: u32, mut k: u32, p: u32) -> u32 {
    let p = p as u64;
    let mut base = a as u64 % p;
    let mut acc = 1u64;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        k >>= 1;
    }
    acc as u32
}

/// Remainder of `a` modulo `b` over GF(p); `b` must be nonzero.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p) as u64;
    let p64 = p as u64;
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = *r.last().unwrap() as u64 * lead_inv % p64;
        for (i, &bc) in b.iter().enumerate() {
            let sub = factor * bc as u64 % p64;
            let slot = &mut r[shift + i];
            *slot = ((*slot as u64 + p64 - sub) % p64) as u32;
        }
        trim(&mut r);
    }
    r
}

/// Decodes `code` into `len` base-p digits (low to high).
fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for d in out.iter_mut() {
        *d = (code % p as u64) as u32;
        code /= p as u64;
    }
    out
}

/// Exhaustive irreducibility test: trial division by every monic polynomial
/// of degree `1..=deg/2`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k as u32);
        for code in 0..count {
            let mut g = digits(code, p, k);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree `e` whose non-leading coefficients
/// `(c_{e-1}, ..., c_0)` are lexicographically smallest.
pub fn default_modulus(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for code in 0..count {
        let mut f = digits(code, p, e as usize);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[derive(Debug)]
pub struct FiniteField {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    pub modulus: Vec<u32>,
    pub default_modulus: bool,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteField {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if p > MAX_PRIME {
            return Err(Error::Unsupported(alloc::format!("prime {p} exceeds 2^31 - 1")));
        }
        let p = p as u32;
        Ok(FiniteField {
            p,
            e: 1,
            q: p,
            modulus: vec![0, 1],
            default_modulus: true,
            exp: Vec::new(),
            log: Vec::new(),
        })
    }

    pub fn extension(p: u64, e: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if e == 0 {
            return Err(Error::Unsupported("extension degree 0".into()));
        }
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if e == 1 {
            if let Some(m) = &modulus {
                if m.len() != 2 || m[1] as u64 % p != 1 {
                    return Err(Error::Unsupported("modulus must be monic of degree e".into()));
                }
            }
            return Self::prime(p);
        }
        let q = (p as u128).pow(e);
        if q > MAX_EXT_ORDER as u128 {
            return Err(Error::Unsupported(alloc::format!(
                "GF({p}^{e}) exceeds {MAX_EXT_ORDER} elements"
            )));
        }
        let p32 = p as u32;
        let default = default_modulus(p32, e);
        let modulus = match modulus {
            None => default.clone(),
            Some(m) => {
                if m.len() != e as usize + 1 || m[e as usize] as u64 % p != 1 {
                    return Err(Error::Unsupported("modulus must be monic of degree e".into()));
                }
                let m: Vec<u32> = m.iter().map(|&c| (c as u64 % p) as u32).collect();
                if !is_irreducible(&m, p32) {
                    return Err(Error::ReducibleModulus(p));
                }
                m
            }
        };
        let mut field = FiniteField {
            p: p32,
            e,
            q: q as u32,
            default_modulus: modulus == default,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    fn poly_mul_code(&self, a: u32, b: u32) -> u32 {
        let e = self.e as usize;
        let p = self.p as u64;
        let da = digits(a as u64, self.p, e);
        let db = digits(b as u64, self.p, e);
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce using x^e = -(c0 + ... + c_{e-1} x^{e-1})
        for k in (e..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..e {
                let sub = c * self.modulus[i] as u64 % p;
                prod[k - e + i] = (prod[k - e + i] + p - sub) % p;
            }
        }
        prod[..e].iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = q - 1;
        let mut exp = vec![0u32; order as usize];
        for g in 2..q {
            let mut x = 1u32;
            let mut ok = true;
            for (i, slot) in exp.iter_mut().enumerate() {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                *slot = x;
                x = self.poly_mul_code(x, g);
            }
            if ok && x == 1 {
                let mut log = vec![0u32; q as usize];
                for (i, &v) in exp.iter().enumerate() {
                    log[v as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        digits(a as u64, self.p, self.e as usize)
    }

    pub fn encode_digits(&self, c: &[u32]) -> u32 {
        let p = self.p as u64;
        c.iter().rev().fold(0u64, |acc, &x| acc * p + (x as u64 % p)) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            let s = a as u64 + b as u64;
            return (if s >= self.p as u64 { s - self.p as u64 } else { s }) as u32;
        }
        let p = self.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.e {
            let s = a % p + b % p;
            out += (if s >= p { s - p } else { s }) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let p = self.p;
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.e {
            let d = a % p;
            out += (if d == 0 { 0 } else { p - d }) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= order { s - order } else { s }) as usize]
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        if self.e == 1 {
            return inv_mod(a, self.p);
        }
        let order = self.q - 1;
        self.exp[((order - self.log[a as usize]) % order) as usize]
    }

    pub fn reduce_u64(&self, n: u64) -> u32 {
        (n % self.p as u64) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_default_modulus_is_unique_quadratic() {
        // oracle: enumerate all monic quadratics over GF(2) and test for roots
        let irreducible: Vec<Vec<u32>> = (0..4u32)
            .map(|code| vec![code & 1, code >> 1, 1])
            .filter(|f| (0..2u32).all(|x| (f[0] + f[1] * x + f[2] * x * x) % 2 != 0))
            .collect();
        assert_eq!(irreducible, vec![vec![1, 1, 1]]);
        assert_eq!(default_modulus(2, 2), vec![1, 1, 1]);
    }

    #[test]
    fn defaults_for_small_fields() {
        assert_eq!(default_modulus(3, 2), vec![1, 0, 1]);
        assert_eq!(default_modulus(2, 3), vec![1, 1, 0, 1]);
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(243), Some((3, 5)));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x + 1)^2 over GF(2)
        let err = FiniteField::extension(2, 2, Some(vec![1, 0, 1])).unwrap_err();
        assert_eq!(err, Error::ReducibleModulus(2));
    }

    #[test]
    fn log_tables_cover_group() {
        let f = FiniteField::extension(3, 3, None).unwrap();
        for a in 1..f.q {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }
}
