use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Fq, Poly};
use crate::error::{domain, Error, Result};

/// Element of an [`ExtField`]: exactly `d` coordinates over F_q in the power
/// basis 1, X, …, X^{d-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExtElem(pub(crate) Vec<u8>);

impl ExtElem {
    pub fn coeffs(&self) -> &[u8] {
        &self.0
    }
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
    pub fn to_poly(&self) -> Poly {
        Poly::new(self.0.clone())
    }
}

/// The extension F_{q^d} = F_q[X]/(g) for a monic irreducible g.
///
/// Degree 1 is allowed (g = X) so rational points and higher-degree points
/// share one code path.
#[derive(Clone)]
pub struct ExtField(Arc<Inner>);

struct Inner {
    base: Fq,
    modulus: Poly,
    d: usize,
    order: BigUint,
    /// Column i holds X^{q·i} mod g; Frobenius is this matrix.
    frob: OnceLock<Vec<Vec<u8>>>,
    nonresidue: OnceLock<ExtElem>,
}

impl ExtField {
    /// Builds F_q[X]/(modulus), checking irreducibility.
    pub fn new(base: &Fq, modulus: Poly) -> Result<ExtField> {
        if modulus.degree().filter(|&d| d >= 1).is_none() {
            return domain("extension modulus must have degree >= 1");
        };
        if modulus.lead() != 1 {
            return domain("extension modulus must be monic");
        }
        if !modulus.is_irreducible(base)? {
            return domain("extension modulus is reducible");
        }
        Ok(ExtField::new_unchecked(base, modulus))
    }

    pub(crate) fn new_unchecked(base: &Fq, modulus: Poly) -> ExtField {
        let d = modulus.degree().expect("nonzero modulus");
        let order = BigUint::from(base.q()).pow(d as u32);
        ExtField(Arc::new(Inner {
            base: base.clone(),
            modulus,
            d,
            order,
            frob: OnceLock::new(),
            nonresidue: OnceLock::new(),
        }))
    }

    /// F_q itself, presented as F_q[X]/(X).
    pub fn base_field(base: &Fq) -> ExtField {
        ExtField::new_unchecked(base, Poly::x())
    }

    /// A deterministic default F_{q^d}: the first irreducible monic polynomial
    /// in the order X^d + c_{d-1}X^{d-1} + … with (c_0, c_1, …) counted upward.
    pub fn standard(base: &Fq, d: usize) -> Result<ExtField> {
        if d == 0 {
            return domain("degree must be at least 1");
        }
        if d == 1 {
            return Ok(ExtField::base_field(base));
        }
        let q = base.q() as u64;
        let mut idx: u64 = 0;
        loop {
            let mut v = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                v.push((x % q) as u8);
                x /= q;
            }
            v.push(1);
            let f = Poly::new(v);
            if f.is_irreducible(base)? {
                return Ok(ExtField::new_unchecked(base, f));
            }
            idx += 1;
        }
    }

    /// F_{q^d} with a modulus drawn from `seed`.
    pub fn random(base: &Fq, d: usize, seed: u64) -> Result<ExtField> {
        if d == 1 {
            return Ok(ExtField::base_field(base));
        }
        Ok(ExtField::new_unchecked(base, Poly::random_irreducible(base, d, seed)?))
    }

    #[inline]
    pub fn base(&self) -> &Fq {
        &self.0.base
    }
    #[inline]
    pub fn degree(&self) -> usize {
        self.0.d
    }
    pub fn modulus(&self) -> &Poly {
        &self.0.modulus
    }
    /// |F_{q^d}|.
    pub fn order(&self) -> &BigUint {
        &self.0.order
    }
    /// |F_{q^d}| when it fits in a u64.
    pub fn order_u64(&self) -> Option<u64> {
        (self.0.base.q() as u64).checked_pow(self.0.d as u32)
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem(vec![0; self.0.d])
    }
    pub fn one(&self) -> ExtElem {
        self.from_base(1)
    }
    /// The class of X (a root of the modulus).
    pub fn gen(&self) -> ExtElem {
        self.reduce_poly(&Poly::x())
    }
    pub fn from_base(&self, c: u8) -> ExtElem {
        let mut v = vec![0; self.0.d];
        v[0] = c;
        ExtElem(v)
    }
    /// The F_q value of an element lying in the prime-level subfield F_q.
    pub fn to_base(&self, a: &ExtElem) -> Option<u8> {
        a.0[1..].iter().all(|&c| c == 0).then_some(a.0[0])
    }

    /// Element from coordinates (length ≤ d, missing entries are zero).
    pub fn elem(&self, coeffs: &[u8]) -> Result<ExtElem> {
        if coeffs.len() > self.0.d || coeffs.iter().any(|&c| c as usize >= self.0.base.q()) {
            return domain("coordinates do not describe an element of this field");
        }
        let mut v = coeffs.to_vec();
        v.resize(self.0.d, 0);
        Ok(ExtElem(v))
    }

    pub fn reduce_poly(&self, p: &Poly) -> ExtElem {
        let r = p.rem(&self.0.base, &self.0.modulus).expect("modulus nonzero");
        let mut v = r.coeffs().to_vec();
        v.resize(self.0.d, 0);
        ExtElem(v)
    }

    /// Index Σ c_i q^i, used to enumerate small fields.
    pub fn index(&self, a: &ExtElem) -> u64 {
        let q = self.0.base.q() as u64;
        a.0.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
    }
    pub fn from_index(&self, mut i: u64) -> ExtElem {
        let q = self.0.base.q() as u64;
        ExtElem(
            (0..self.0.d)
                .map(|_| {
                    let c = (i % q) as u8;
                    i /= q;
                    c
                })
                .collect(),
        )
    }

    pub fn random_elem<R: Rng>(&self, rng: &mut R) -> ExtElem {
        let q = self.0.base.q();
        ExtElem((0..self.0.d).map(|_| rng.gen_range(0..q) as u8).collect())
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let f = &self.0.base;
        ExtElem(a.0.iter().zip(&b.0).map(|(&x, &y)| f.add(x, y)).collect())
    }
    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let f = &self.0.base;
        ExtElem(a.0.iter().zip(&b.0).map(|(&x, &y)| f.sub(x, y)).collect())
    }
    pub fn neg(&self, a: &ExtElem) -> ExtElem {
        let f = &self.0.base;
        ExtElem(a.0.iter().map(|&x| f.neg(x)).collect())
    }
    pub fn scale(&self, a: &ExtElem, c: u8) -> ExtElem {
        let f = &self.0.base;
        ExtElem(a.0.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let d = self.0.d;
        if d == 1 {
            return ExtElem(vec![self.0.base.mul(a.0[0], b.0[0])]);
        }
        let f = &self.0.base;
        let m = self.0.modulus.coeffs();
        if f.is_prime_field() {
            // accumulate in u32, reduce once per coefficient
            let p = f.p() as u32;
            let mut acc = vec![0u32; 2 * d - 1];
            for (i, &x) in a.0.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let x = x as u32;
                for (j, &y) in b.0.iter().enumerate() {
                    acc[i + j] += x * y as u32;
                }
            }
            for t in (d..2 * d - 1).rev() {
                let c = acc[t] % p;
                if c != 0 {
                    let nc = p - c;
                    for i in 0..d {
                        acc[t - d + i] += nc * m[i] as u32;
                    }
                }
            }
            ExtElem(acc[..d].iter().map(|&v| (v % p) as u8).collect())
        } else {
            let mut acc = vec![0u8; 2 * d - 1];
            for (i, &x) in a.0.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.0.iter().enumerate() {
                    acc[i + j] = f.add(acc[i + j], f.mul(x, y));
                }
            }
            for t in (d..2 * d - 1).rev() {
                let c = acc[t];
                if c != 0 {
                    for i in 0..d {
                        acc[t - d + i] = f.sub(acc[t - d + i], f.mul(c, m[i]));
                    }
                }
            }
            acc.truncate(d);
            ExtElem(acc)
        }
    }

    pub fn square(&self, a: &ExtElem) -> ExtElem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: &ExtElem) -> Result<ExtElem> {
        if a.is_zero() {
            return domain("inversion of zero");
        }
        let (g, s, _) = a.to_poly().ext_gcd(&self.0.base, &self.0.modulus);
        if !g.is_one() {
            return Err(Error::Internal("modulus not irreducible".into()));
        }
        Ok(self.reduce_poly(&s))
    }

    pub fn div(&self, a: &ExtElem, b: &ExtElem) -> Result<ExtElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &ExtElem, e: &BigUint) -> ExtElem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn pow_u64(&self, a: &ExtElem, e: u64) -> ExtElem {
        self.pow(a, &BigUint::from(e))
    }

    fn frob_matrix(&self) -> &Vec<Vec<u8>> {
        self.0.frob.get_or_init(|| {
            let d = self.0.d;
            let xq = self.pow_u64(&self.gen(), self.0.base.q() as u64);
            let mut cols = Vec::with_capacity(d);
            let mut cur = self.one();
            for _ in 0..d {
                cols.push(cur.0.clone());
                cur = self.mul(&cur, &xq);
            }
            cols
        })
    }

    /// a ↦ a^q, applied as an F_q-linear map.
    pub fn frobenius(&self, a: &ExtElem) -> ExtElem {
        if self.0.d == 1 {
            return a.clone();
        }
        let f = &self.0.base;
        let cols = self.frob_matrix();
        let mut out = vec![0u8; self.0.d];
        for (i, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(&cols[i]) {
                *o = f.add(*o, f.mul(c, v));
            }
        }
        ExtElem(out)
    }

    /// The distinct conjugates a, a^q, a^{q^2}, ... (length = degree of a over F_q).
    pub fn conjugates(&self, a: &ExtElem) -> Vec<ExtElem> {
        let mut out = vec![a.clone()];
        let mut cur = self.frobenius(a);
        while &cur != a {
            out.push(cur.clone());
            cur = self.frobenius(&cur);
        }
        out
    }

    /// Minimal polynomial of `a` over F_q.
    pub fn min_poly(&self, a: &ExtElem) -> Poly {
        let mut acc = vec![self.one()];
        for c in self.conjugates(a) {
            // acc ← acc·(X − c)
            let mut next = vec![self.zero(); acc.len() + 1];
            for (i, t) in acc.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], t);
                next[i] = self.sub(&next[i], &self.mul(t, &c));
            }
            acc = next;
        }
        Poly::new(acc.iter().map(|c| self.to_base(c).expect("coefficients lie in F_q")).collect())
    }

    /// Evaluates a polynomial over F_q at an element.
    pub fn eval_poly(&self, p: &Poly, x: &ExtElem) -> ExtElem {
        let mut acc = self.zero();
        for &c in p.coeffs().iter().rev() {
            acc = self.mul(&acc, x);
            acc.0[0] = self.0.base.add(acc.0[0], c);
        }
        acc
    }

    fn require_odd(&self) -> Result<()> {
        if self.0.base.p() == 2 {
            return Err(Error::Unsupported("square roots in characteristic 2; use the Artin-Schreier solver".into()));
        }
        Ok(())
    }

    /// Euler's criterion.
    pub fn is_square(&self, a: &ExtElem) -> Result<bool> {
        self.require_odd()?;
        if a.is_zero() {
            return Ok(true);
        }
        let e = (self.order() - 1u32) >> 1;
        Ok(self.pow(a, &e) == self.one())
    }

    fn nonresidue(&self) -> &ExtElem {
        self.0.nonresidue.get_or_init(|| {
            let mut i = 2u64;
            loop {
                let z = self.from_index(i);
                if !self.is_square(&z).unwrap_or(true) {
                    return z;
                }
                i += 1;
            }
        })
    }

    /// A square root in odd characteristic, `None` for non-squares.
    pub fn sqrt(&self, a: &ExtElem) -> Result<Option<ExtElem>> {
        self.require_odd()?;
        if a.is_zero() {
            return Ok(Some(self.zero()));
        }
        if !self.is_square(a)? {
            return Ok(None);
        }
        let order = self.order();
        let four = BigUint::from(4u32);
        if order % &four == BigUint::from(3u32) {
            let e = (order + 1u32) / four;
            return Ok(Some(self.pow(a, &e)));
        }
        // Tonelli–Shanks
        let mut t = order - 1u32;
        let mut s = 0u32;
        while !t.bit(0) {
            t >>= 1;
            s += 1;
        }
        let mut m = s;
        let mut c = self.pow(self.nonresidue(), &t);
        let mut tt = self.pow(a, &t);
        let mut r = self.pow(a, &((&t + 1u32) >> 1));
        let one = self.one();
        while tt != one {
            let mut i = 0;
            let mut sq = tt.clone();
            while sq != one {
                sq = self.square(&sq);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = self.square(&b);
            }
            m = i;
            c = self.square(&b);
            tt = self.mul(&tt, &c);
            r = self.mul(&r, &b);
        }
        Ok(Some(r))
    }

    /// Number of F_2-coordinates, for characteristic-2 fields.
    fn bits(&self) -> usize {
        self.0.base.k() * self.0.d
    }

    /// Absolute trace to F_2 of an element in characteristic 2.
    pub fn abs_trace(&self, c: &ExtElem) -> Result<u8> {
        if self.0.base.p() != 2 {
            return domain("absolute trace to F_2 needs characteristic 2");
        }
        let mut acc = self.zero();
        let mut cur = c.clone();
        for _ in 0..self.bits() {
            acc = self.add(&acc, &cur);
            cur = self.square(&cur);
        }
        self.to_base(&acc)
            .filter(|&t| t < 2)
            .ok_or_else(|| Error::Internal("trace left F_2".into()))
    }

    /// Solves y² + y = c in characteristic 2; `None` iff the trace of c is 1.
    pub fn solve_artin_schreier(&self, c: &ExtElem) -> Result<Option<ExtElem>> {
        if self.abs_trace(c)? != 0 {
            return Ok(None);
        }
        let m = self.bits();
        let y = if m % 2 == 1 {
            // half-trace Σ c^{4^i}
            let mut acc = self.zero();
            let mut cur = c.clone();
            for _ in 0..=(m - 1) / 2 {
                acc = self.add(&acc, &cur);
                cur = self.square(&self.square(&cur));
            }
            acc
        } else {
            // with Tr(δ) = 1: y = Σ_{i<m-1} (Σ_{j>i} δ^{2^j}) c^{2^i}
            let delta = (1..self.order_u64().unwrap_or(u64::MAX))
                .map(|i| self.from_index(i))
                .find(|e| self.abs_trace(e).ok() == Some(1))
                .expect("trace is a nonzero functional");
            let mut dpow = Vec::with_capacity(m);
            let mut cur = delta;
            for _ in 0..m {
                dpow.push(cur.clone());
                cur = self.square(&cur);
            }
            let mut suffix = vec![self.zero(); m + 1];
            for j in (0..m).rev() {
                suffix[j] = self.add(&suffix[j + 1], &dpow[j]);
            }
            let mut acc = self.zero();
            let mut cp = c.clone();
            for s in suffix.iter().skip(1).take(m - 1) {
                acc = self.add(&acc, &self.mul(s, &cp));
                cp = self.square(&cp);
            }
            acc
        };
        if self.add(&self.square(&y), &y) != *c {
            return Err(Error::Internal("Artin-Schreier solution failed to verify".into()));
        }
        Ok(Some(y))
    }

    /// Solutions y of y² + h·y = r (zero, one or two of them).
    pub fn solve_quadratic(&self, h: &ExtElem, r: &ExtElem) -> Result<Vec<ExtElem>> {
        if self.0.base.p() == 2 {
            if h.is_zero() {
                // Frobenius is bijective: y = r^{2^{m-1}}
                let mut y = r.clone();
                for _ in 0..self.bits() - 1 {
                    y = self.square(&y);
                }
                return Ok(vec![y]);
            }
            // y = h·z with z² + z = r/h²
            let c = self.div(r, &self.square(h))?;
            return Ok(match self.solve_artin_schreier(&c)? {
                None => vec![],
                Some(z) => {
                    let y1 = self.mul(h, &z);
                    let y2 = self.add(&y1, h);
                    vec![y1, y2]
                }
            });
        }
        // (y + h/2)² = r + h²/4
        let two = self.0.base.from_int(2);
        let half_h = self.scale(h, self.0.base.inv(two)?);
        let disc = self.add(r, &self.square(&half_h));
        Ok(match self.sqrt(&disc)? {
            None => vec![],
            Some(s) if s.is_zero() => vec![self.neg(&half_h)],
            Some(s) => vec![self.sub(&s, &half_h), self.sub(&self.neg(&s), &half_h)],
        })
    }

    /// Human-readable element, written in the variable `w`.
    pub fn fmt_elem(&self, a: &ExtElem) -> String {
        if self.0.d == 1 {
            return self.0.base.fmt_elem(a.0[0]);
        }
        a.to_poly().display(&self.0.base, "w")
    }
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.base == other.0.base && self.0.modulus == other.0.modulus)
    }
}
impl Eq for ExtField {}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.0.base.q(), self.0.d, self.0.modulus.coeffs())
    }
}
