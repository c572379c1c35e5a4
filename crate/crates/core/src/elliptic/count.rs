use std::fmt;

use serde::Serialize;

use super::{Curve, Point};
use crate::error::{Error, Result};
use crate::gf::{ExtElem, ExtField};

/// Largest field we are willing to exhaust.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

/// Point and place counts derived from the zeta function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaData {
    pub q: u64,
    /// Frobenius trace m = q + 1 − N_1.
    pub trace: i64,
    /// `n[d-1]` = N_d, points over F_{q^d} (including P_∞).
    pub n: Vec<i128>,
    /// `b[d-1]` = B_d, places of degree d.
    pub b: Vec<i128>,
}

impl ZetaData {
    pub fn n_d(&self, d: usize) -> i128 {
        self.n[d - 1]
    }
    pub fn b_d(&self, d: usize) -> i128 {
        self.b[d - 1]
    }
}

/// Invariant factors n1 | n2 of C(F_q) ≅ Z/n1 × Z/n2 (trivial factors dropped).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupStructure {
    pub order: u64,
    pub factors: Vec<u64>,
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Finds y with y² + h·y = r by table lookup over a small field.
struct RootTable {
    ext: ExtField,
    /// index(y²) → index(y) + 1 (0 = none); y ↦ y² is bijective in char 2.
    sq: Vec<u32>,
    /// char 2 only: index(z² + z) → index(z) + 1.
    as_: Vec<u32>,
}

impl RootTable {
    fn new(ext: &ExtField) -> Result<RootTable> {
        let order = ext.order_u64().filter(|&o| o <= ENUMERATION_LIMIT).ok_or_else(|| {
            Error::Resource(format!(
                "F_{}^{} has more than {ENUMERATION_LIMIT} elements; sample places with random_place instead",
                ext.base().q(),
                ext.degree()
            ))
        })?;
        let char2 = ext.base().p() == 2;
        let mut sq = vec![0u32; order as usize];
        let mut as_ = if char2 { vec![0u32; order as usize] } else { Vec::new() };
        for i in 0..order {
            let y = ext.from_index(i);
            let s = ext.square(&y);
            let si = ext.index(&s) as usize;
            if sq[si] == 0 {
                sq[si] = i as u32 + 1;
            }
            if char2 {
                let ai = ext.index(&ext.add(&s, &y)) as usize;
                if as_[ai] == 0 {
                    as_[ai] = i as u32 + 1;
                }
            }
        }
        Ok(RootTable { ext: ext.clone(), sq, as_ })
    }

    fn solve(&self, h: &ExtElem, r: &ExtElem) -> Vec<ExtElem> {
        let e = &self.ext;
        let look = |t: &[u32], v: &ExtElem| -> Option<ExtElem> {
            match t[e.index(v) as usize] {
                0 => None,
                k => Some(e.from_index(k as u64 - 1)),
            }
        };
        if e.base().p() == 2 {
            if h.is_zero() {
                return vec![look(&self.sq, r).expect("squaring is onto in char 2")];
            }
            let c = e.div(r, &e.square(h)).expect("h nonzero");
            return match look(&self.as_, &c) {
                None => vec![],
                Some(z) => {
                    let y1 = e.mul(h, &z);
                    let y2 = e.add(&y1, h);
                    vec![y1, y2]
                }
            };
        }
        let two_inv = e.base().inv(e.base().from_int(2)).expect("odd characteristic");
        let half_h = e.scale(h, two_inv);
        let disc = e.add(r, &e.square(&half_h));
        if disc.is_zero() {
            return vec![e.neg(&half_h)];
        }
        match look(&self.sq, &disc) {
            None => vec![],
            Some(s) => vec![e.sub(&s, &half_h), e.sub(&e.neg(&s), &half_h)],
        }
    }
}

impl Curve {
    /// All points over the given field, P_∞ first, then affine points by x index.
    pub fn points_over(&self, ext: &ExtField) -> Result<Vec<Point>> {
        let table = RootTable::new(ext)?;
        let order = ext.order_u64().expect("checked by RootTable");
        let mut pts = vec![Point::Infinity];
        for i in 0..order {
            let x = ext.from_index(i);
            let mut ys = table.solve(&self.h_at(ext, &x), &self.f_at(ext, &x));
            ys.sort();
            for y in ys {
                pts.push(Point::Affine(x.clone(), y));
            }
        }
        Ok(pts)
    }

    /// Rational points C(F_q).
    pub fn rational_points(&self) -> Result<Vec<Point>> {
        self.points_over(&ExtField::base_field(self.fq()))
    }
}

/// All points of `curve` over F_{q^d} (in a default model of that field).
pub fn enumerate_points(curve: &Curve, d: usize) -> Result<Vec<Point>> {
    let ext = ExtField::standard(curve.fq(), d)?;
    curve.points_over(&ext)
}

pub(crate) fn mobius(n: usize) -> i128 {
    let (mut n, mut k, mut p) = (n, 0, 2);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            k += 1;
        }
        p += 1;
    }
    if n > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// N_d and B_d for d ≤ dmax from the rational point count.
pub fn zeta_counts(curve: &Curve, dmax: usize) -> Result<ZetaData> {
    let n1 = curve.rational_points()?.len() as i128;
    Ok(zeta_from_n1(curve.q() as u64, n1, dmax))
}

/// Same as [`zeta_counts`] when N_1 is already known.
pub fn zeta_from_n1(q: u64, n1: i128, dmax: usize) -> ZetaData {
    let qi = q as i128;
    let m = qi + 1 - n1;
    // s_d = α^d + β^d with α + β = m, αβ = q
    let mut s = vec![2i128, m];
    for d in 2..=dmax {
        s.push(m * s[d - 1] - qi * s[d - 2]);
    }
    let n: Vec<i128> = (1..=dmax).map(|d| qi.pow(d as u32) + 1 - s[d]).collect();
    let b: Vec<i128> = (1..=dmax)
        .map(|d| {
            let sum: i128 = (1..=d).filter(|e| d % e == 0).map(|e| mobius(d / e) * n[e - 1]).sum();
            sum / d as i128
        })
        .collect();
    ZetaData { q, trace: m as i64, n, b }
}

/// Invariant factors by exhaustive order counting over C(F_q).
pub fn group_structure(curve: &Curve) -> Result<GroupStructure> {
    let ext = ExtField::base_field(curve.fq());
    let pts = curve.rational_points()?;
    let order = pts.len() as u64;
    let mut exponent = 1u64;
    for p in &pts {
        let mut k = 1u64;
        let mut cur = p.clone();
        while !cur.is_infinity() {
            cur = curve.add_unchecked(&ext, &cur, p);
            k += 1;
        }
        exponent = lcm(exponent, k);
    }
    let n1 = order / exponent;
    let factors = [n1, exponent].into_iter().filter(|&f| f > 1).collect();
    Ok(GroupStructure { order, factors })
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}
