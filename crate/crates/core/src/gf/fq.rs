use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Result};

/// A small finite field F_q with q = p^k ≤ 256, driven by lookup tables.
///
/// Elements are `u8` indices: the element c_0 + c_1·a + … + c_{k-1}·a^{k-1}
/// (with `a` a root of the defining modulus over F_p) has index Σ c_i·p^i.
/// For prime q this is just the residue in `[0, p)`.
#[derive(Clone)]
pub struct Fq(Arc<Inner>);

struct Inner {
    p: u8,
    k: usize,
    q: usize,
    /// Monic modulus over F_p, constant term first. `[0, 1]` when k = 1.
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// Conway polynomials for the non-prime fields we name by default.
const CONWAY: &[(u8, &[u8])] = &[
    (2, &[1, 1, 1]),       // F_4: a^2 + a + 1
    (2, &[1, 1, 0, 1]),    // F_8: a^3 + a + 1
    (2, &[1, 1, 0, 0, 1]), // F_16: a^4 + a + 1
    (3, &[2, 2, 1]),       // F_9: a^2 + 2a + 2
    (3, &[1, 2, 0, 1]),    // F_27: a^3 + 2a + 1
    (5, &[2, 4, 1]),       // F_25: a^2 + 4a + 2
    (7, &[3, 6, 1]),       // F_49: a^2 + 6a + 3
];

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits q into (p, k) with q = p^k, or `None` when q is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

impl Fq {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Fq> {
        if !is_prime(p) || p > 251 {
            return domain(format!("{p} is not a supported prime"));
        }
        Fq::with_modulus(p as u8, &[0, 1])
    }

    /// F_q with a default modulus: F_p itself when q is prime, otherwise the
    /// Conway polynomial (F_4 = F_2[a]/(a²+a+1), F_9 = F_3[a]/(a²+2a+2), ...).
    pub fn standard(q: u64) -> Result<Fq> {
        let Some((p, k)) = prime_power(q) else {
            return domain(format!("q = {q} is not a prime power"));
        };
        if k == 1 {
            return Fq::prime(p);
        }
        match CONWAY.iter().find(|(pp, m)| *pp as u64 == p && m.len() == k + 1) {
            Some((_, m)) => Fq::with_modulus(p as u8, m),
            None => domain(format!("no default modulus for q = {q}")),
        }
    }

    /// F_p[a]/(modulus) where `modulus` is monic over F_p, constant term first.
    pub fn with_modulus(p: u8, modulus: &[u8]) -> Result<Fq> {
        if !is_prime(p as u64) {
            return domain(format!("{p} is not prime"));
        }
        let k = modulus.len().saturating_sub(1);
        if k == 0 || modulus[k] != 1 || modulus.iter().any(|&c| c >= p) {
            return domain("modulus must be monic of degree >= 1 with reduced coefficients");
        }
        let q = (p as usize).checked_pow(k as u32).filter(|&q| q <= 256);
        let Some(q) = q else {
            return domain("field too large for table arithmetic");
        };
        if k > 1 && !brute_irreducible(p, modulus) {
            return domain("modulus is reducible");
        }
        let pu = p as usize;
        let digits = |mut x: usize| -> Vec<usize> {
            (0..k)
                .map(|_| {
                    let c = x % pu;
                    x /= pu;
                    c
                })
                .collect()
        };
        let undigits = |v: &[usize]| v.iter().rev().fold(0usize, |acc, &c| acc * pu + c);

        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let mut neg = vec![0u8; q];
        for a in 0..q {
            let da = digits(a);
            neg[a] = undigits(&da.iter().map(|&c| (pu - c) % pu).collect::<Vec<_>>()) as u8;
            for b in 0..q {
                let db = digits(b);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % pu).collect();
                add[a * q + b] = undigits(&s) as u8;
                // schoolbook product then reduction by the monic modulus
                let mut prod = vec![0usize; 2 * k - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % pu;
                    }
                }
                for t in (k..prod.len()).rev() {
                    let c = prod[t];
                    if c != 0 {
                        for i in 0..=k {
                            let m = modulus[i] as usize;
                            prod[t - k + i] = (prod[t - k + i] + (pu - c) * m) % pu;
                        }
                    }
                }
                mul[a * q + b] = undigits(&prod[..k]) as u8;
            }
        }
        let mut inv = vec![0u8; q];
        for a in 1..q {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).expect("field has inverses") as u8;
        }
        Ok(Fq(Arc::new(Inner { p, k, q, modulus: modulus.to_vec(), add, mul, neg, inv })))
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.0.q
    }
    #[inline]
    pub fn p(&self) -> u8 {
        self.0.p
    }
    /// Degree of F_q over its prime field.
    #[inline]
    pub fn k(&self) -> usize {
        self.0.k
    }
    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }
    /// Defining polynomial of F_q over F_p, constant term first.
    pub fn modulus(&self) -> &[u8] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.0.add[a as usize * self.0.q + b as usize]
    }
    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.0.neg[a as usize]
    }
    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.0.mul[a as usize * self.0.q + b as usize]
    }
    pub fn inv(&self, a: u8) -> Result<u8> {
        if a == 0 {
            return domain("inversion of zero");
        }
        Ok(self.0.inv[a as usize])
    }
    pub fn div(&self, a: u8, b: u8) -> Result<u8> {
        Ok(self.mul(a, self.inv(b)?))
    }
    pub fn pow(&self, a: u8, mut e: u64) -> u8 {
        let (mut base, mut acc) = (a, 1u8);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Image of an integer under Z → F_p ⊂ F_q.
    pub fn from_int(&self, n: i64) -> u8 {
        n.rem_euclid(self.0.p as i64) as u8
    }

    /// The generator `a` of F_q over F_p (index p), or 1 for prime fields.
    pub fn generator(&self) -> u8 {
        if self.0.k == 1 {
            1
        } else {
            self.0.p
        }
    }

    /// Coordinates over F_p of an element, constant term first.
    pub fn digits(&self, a: u8) -> Vec<u8> {
        let p = self.0.p as usize;
        let mut x = a as usize;
        (0..self.0.k)
            .map(|_| {
                let c = x % p;
                x /= p;
                c as u8
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u8]) -> Result<u8> {
        let p = self.0.p as usize;
        if d.len() > self.0.k || d.iter().any(|&c| c as usize >= p) {
            return domain("digits out of range");
        }
        Ok(d.iter().rev().fold(0usize, |acc, &c| acc * p + c as usize) as u8)
    }

    /// Checks that an index is a valid element.
    pub fn check(&self, a: u64) -> Result<u8> {
        if a as usize >= self.0.q {
            return domain(format!("{a} is not an element of F_{}", self.0.q));
        }
        Ok(a as u8)
    }

    /// Human-readable element: `2`, `a`, `2a+1`.
    pub fn fmt_elem(&self, a: u8) -> String {
        if self.0.k == 1 {
            return a.to_string();
        }
        let d = self.digits(a);
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            parts.push(match i {
                0 => coef,
                1 => format!("{coef}a"),
                _ => format!("{coef}a^{i}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

/// Irreducibility of a small modulus over F_p by trial division.
fn brute_irreducible(p: u8, m: &[u8]) -> bool {
    let k = m.len() - 1;
    let p = p as usize;
    // try all monic divisors of degree 1..=k/2
    for dd in 1..=k / 2 {
        let count = p.pow(dd as u32);
        for idx in 0..count {
            let mut g = vec![0usize; dd + 1];
            let mut x = idx;
            for c in g.iter_mut().take(dd) {
                *c = x % p;
                x /= p;
            }
            g[dd] = 1;
            let mut r: Vec<usize> = m.iter().map(|&c| c as usize).collect();
            for t in (dd..=k).rev() {
                let c = r[t];
                if c != 0 {
                    for i in 0..=dd {
                        r[t - dd + i] = (r[t - dd + i] + (p - c) * g[i]) % p;
                    }
                }
            }
            if r[..dd].iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}
