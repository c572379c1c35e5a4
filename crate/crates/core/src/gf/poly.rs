use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Fq;
use crate::error::{domain, Result};

/// Univariate polynomial over a small field, constant term first.
///
/// The coefficient vector never has trailing zeros, so the zero polynomial
/// is the empty vector and `degree()` returns `None` for it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly(Vec<u8>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }
    pub fn one() -> Poly {
        Poly(vec![1])
    }
    pub fn constant(c: u8) -> Poly {
        Poly::new(vec![c])
    }
    /// The monomial X.
    pub fn x() -> Poly {
        Poly(vec![0, 1])
    }
    pub fn monomial(c: u8, e: usize) -> Poly {
        let mut v = vec![0; e + 1];
        v[e] = c;
        Poly::new(v)
    }
    pub fn new(mut coeffs: Vec<u8>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly(coeffs)
    }
    /// Validates the coefficients against `fq` before normalizing.
    pub fn from_coeffs(fq: &Fq, coeffs: &[u64]) -> Result<Poly> {
        let v = coeffs.iter().map(|&c| fq.check(c)).collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(v))
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.0
    }
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    /// Degree with the zero polynomial mapped to -1, handy for comparisons.
    pub fn deg_i(&self) -> i64 {
        self.0.len() as i64 - 1
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }
    pub fn lead(&self) -> u8 {
        self.0.last().copied().unwrap_or(0)
    }
    pub fn coeff(&self, i: usize) -> u8 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn add(&self, fq: &Fq, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| fq.add(self.coeff(i), o.coeff(i))).collect())
    }
    pub fn sub(&self, fq: &Fq, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| fq.sub(self.coeff(i), o.coeff(i))).collect())
    }
    pub fn neg(&self, fq: &Fq) -> Poly {
        Poly(self.0.iter().map(|&c| fq.neg(c)).collect())
    }
    pub fn scale(&self, fq: &Fq, c: u8) -> Poly {
        Poly::new(self.0.iter().map(|&a| fq.mul(a, c)).collect())
    }
    /// Multiplication by X^e.
    pub fn shift(&self, e: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![0; e];
        v.extend_from_slice(&self.0);
        Poly(v)
    }

    pub fn mul(&self, fq: &Fq, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut r = vec![0u8; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                r[i + j] = fq.add(r[i + j], fq.mul(a, b));
            }
        }
        Poly::new(r)
    }

    pub fn pow(&self, fq: &Fq, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(fq, self);
        }
        acc
    }

    /// Euclidean division: `self = q·d + r` with deg r < deg d.
    pub fn divrem(&self, fq: &Fq, d: &Poly) -> Result<(Poly, Poly)> {
        let Some(dd) = d.degree() else {
            return domain("polynomial division by zero");
        };
        let inv_lead = fq.inv(d.lead())?;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![0u8; r.len() - dd];
        for t in (dd..r.len()).rev() {
            let c = fq.mul(r[t], inv_lead);
            if c == 0 {
                continue;
            }
            quot[t - dd] = c;
            for (i, &m) in d.0.iter().enumerate() {
                r[t - dd + i] = fq.sub(r[t - dd + i], fq.mul(c, m));
            }
        }
        r.truncate(dd);
        Ok((Poly::new(quot), Poly::new(r)))
    }

    pub fn rem(&self, fq: &Fq, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(fq, d)?.1)
    }

    /// Exact division; errors when `d` does not divide `self`.
    pub fn div_exact(&self, fq: &Fq, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(fq, d)?;
        if !r.is_zero() {
            return domain("inexact polynomial division");
        }
        Ok(q)
    }

    pub fn monic(&self, fq: &Fq) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = fq.inv(self.lead()).expect("nonzero lead");
        self.scale(fq, inv)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, fq: &Fq, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(fq, &b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.monic(fq)
    }

    /// Returns (g, s, t) with s·self + t·o = g, g monic.
    pub fn ext_gcd(&self, fq: &Fq, o: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(fq, &r1).expect("r1 nonzero");
            let s = s0.sub(fq, &q.mul(fq, &s1));
            let t = t0.sub(fq, &q.mul(fq, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = fq.inv(r0.lead()).expect("nonzero lead");
        (r0.scale(fq, inv), s0.scale(fq, inv), t0.scale(fq, inv))
    }

    pub fn eval(&self, fq: &Fq, x: u8) -> u8 {
        self.0.iter().rev().fold(0, |acc, &c| fq.add(fq.mul(acc, x), c))
    }

    pub fn derivative(&self, fq: &Fq) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| fq.mul(fq.from_int(i as i64), c))
                .collect(),
        )
    }

    /// `self^e mod m` for a small exponent.
    pub fn pow_mod(&self, fq: &Fq, mut e: u64, m: &Poly) -> Result<Poly> {
        let mut base = self.rem(fq, m)?;
        let mut acc = Poly::one().rem(fq, m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(fq, &base).rem(fq, m)?;
            }
            base = base.mul(fq, &base).rem(fq, m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Distinct-degree irreducibility test: `f` of degree d is irreducible iff
    /// gcd(X^{q^i} − X, f) = 1 for every i ≤ d/2.
    pub fn is_irreducible(&self, fq: &Fq) -> Result<bool> {
        let Some(d) = self.degree() else {
            return domain("irreducibility of the zero polynomial");
        };
        if d == 0 {
            return domain("irreducibility of a constant");
        }
        let f = self.monic(fq);
        let mut h = Poly::x().rem(fq, &f)?;
        for _ in 1..=d / 2 {
            h = h.pow_mod(fq, fq.q() as u64, &f)?;
            if !h.sub(fq, &Poly::x()).gcd(fq, &f).is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A pseudo-random monic irreducible polynomial of degree `d`.
    pub fn random_irreducible(fq: &Fq, d: usize, seed: u64) -> Result<Poly> {
        if d == 0 {
            return domain("degree must be at least 1");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let mut v: Vec<u8> = (0..d).map(|_| rng.gen_range(0..fq.q()) as u8).collect();
            v.push(1);
            let f = Poly(v);
            if f.is_irreducible(fq)? {
                return Ok(f);
            }
        }
    }

    /// Human-readable form in the variable `var`, highest degree first.
    pub fn display(&self, fq: &Fq, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let cs = fq.fmt_elem(c);
            let cs = if cs.contains('+') && i > 0 { format!("({cs})") } else { cs };
            let coef = if c == 1 && i > 0 { String::new() } else { cs };
            parts.push(match i {
                0 => coef,
                1 => format!("{coef}{var}"),
                _ => format!("{coef}{var}^{i}"),
            });
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Fq {
        Fq::standard(q).unwrap()
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(Poly::new(vec![0, 0]).degree(), None);
        assert_eq!(Poly::zero().deg_i(), -1);
        assert!(Poly::zero() < Poly::one());
    }

    #[test]
    fn divrem_reconstructs() {
        let fq = f(3);
        let a = Poly::new(vec![1, 2, 0, 1, 2]);
        let b = Poly::new(vec![2, 1, 1]);
        let (q, r) = a.divrem(&fq, &b).unwrap();
        assert_eq!(q.mul(&fq, &b).add(&fq, &r), a);
        assert!(r.deg_i() < b.deg_i());
    }

    #[test]
    fn ext_gcd_bezout() {
        let fq = f(5);
        let a = Poly::new(vec![1, 3, 0, 4, 1]);
        let b = Poly::new(vec![2, 0, 1]);
        let (g, s, t) = a.ext_gcd(&fq, &b);
        assert_eq!(s.mul(&fq, &a).add(&fq, &t.mul(&fq, &b)), g);
    }

    #[test]
    fn small_irreducibility_cases() {
        let f3 = f(3);
        assert!(Poly::new(vec![1, 0, 1]).is_irreducible(&f3).unwrap());
        assert!(!Poly::new(vec![2, 0, 1]).is_irreducible(&f3).unwrap());
        assert!(Poly::x().is_irreducible(&f(2)).unwrap());
    }

    #[test]
    fn degree_one_random_irreducible() {
        let fq = f(3);
        let p = Poly::random_irreducible(&fq, 1, 7).unwrap();
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.lead(), 1);
    }

    #[test]
    fn random_irreducible_cubic_has_no_linear_factor() {
        let fq = f(2);
        for seed in 0..20 {
            let p = Poly::random_irreducible(&fq, 3, seed).unwrap();
            // brute force: no root in F_2 means no degree-1 divisor
            assert!((0..2u8).all(|x| p.eval(&fq, x) != 0));
        }
    }

    #[test]
    fn irreducible_agrees_with_root_search_over_f4_quadratics() {
        let fq = f(4);
        for c0 in 0..4u8 {
            for c1 in 0..4u8 {
                let p = Poly::new(vec![c0, c1, 1]);
                let has_root = (0..4u8).any(|x| p.eval(&fq, x) == 0);
                assert_eq!(p.is_irreducible(&fq).unwrap(), !has_root);
            }
        }
    }

    #[test]
    fn derivative_in_char_three() {
        let fq = f(3);
        // d/dX (X^3 + X^2) = 2X
        let p = Poly::new(vec![0, 0, 1, 1]);
        assert_eq!(p.derivative(&fq), Poly::new(vec![0, 2]));
    }

    #[test]
    fn display_uses_field_symbols() {
        let fq = f(9);
        let p = Poly::new(vec![1, fq.generator(), 1]);
        assert_eq!(p.display(&fq, "x"), "x^2 + ax + 1");
    }
}
