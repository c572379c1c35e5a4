use std::fmt;

use serde::{Deserialize, Serialize};

use super::parse::parse_equation;
use crate::error::{domain, Error, Result};
use crate::gf::{ExtElem, ExtField, Fq, Poly};

/// A point over some F_{q^d}. The field is not stored; callers pass it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Infinity,
    Affine(ExtElem, ExtElem),
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

/// y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6 over F_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    fq: Fq,
    a: [u8; 5],
}

/// Serialized form of a curve: base field plus a1..a6 as F_q indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub q: u64,
    /// Defining polynomial of F_q over F_p when q is not prime.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u8>>,
    pub a1: u8,
    pub a2: u8,
    pub a3: u8,
    pub a4: u8,
    pub a6: u8,
}

impl Curve {
    /// Coefficients in the order a1, a2, a3, a4, a6.
    pub fn new(fq: &Fq, a: [u8; 5]) -> Result<Curve> {
        for &c in &a {
            fq.check(c as u64)?;
        }
        let c = Curve { fq: fq.clone(), a };
        if c.discriminant() == 0 {
            return domain(format!("singular curve: {}", c.equation()));
        }
        Ok(c)
    }

    /// Parses an equation in x, y (and `a`, the generator of a non-prime F_q)
    /// and normalizes it to Weierstrass form. The y² and x³ coefficients must
    /// be opposite once everything is moved to one side.
    pub fn parse(fq: &Fq, s: &str) -> Result<Curve> {
        let poly = parse_equation(fq, s)?;
        let allowed = [(0, 2), (1, 1), (0, 1), (3, 0), (2, 0), (1, 0), (0, 0)];
        if let Some(k) = poly.keys().find(|k| !allowed.contains(k)) {
            return Err(Error::Parse(format!("monomial x^{} y^{} is not of Weierstrass type", k.0, k.1)));
        }
        let get = |k| poly.get(&k).copied().unwrap_or(0);
        let cy2 = get((0, 2));
        if cy2 == 0 {
            return Err(Error::Parse("missing y^2 term".into()));
        }
        let s = fq.inv(cy2)?;
        let norm = |k| fq.mul(get(k), s);
        if norm((3, 0)) != fq.neg(1) {
            return Err(Error::Parse("the x^3 and y^2 coefficients must be opposite".into()));
        }
        let a1 = norm((1, 1));
        let a3 = norm((0, 1));
        let a2 = fq.neg(norm((2, 0)));
        let a4 = fq.neg(norm((1, 0)));
        let a6 = fq.neg(norm((0, 0)));
        Curve::new(fq, [a1, a2, a3, a4, a6])
    }

    pub fn from_json(j: &CurveJson) -> Result<Curve> {
        let fq = match &j.modulus {
            Some(m) => {
                let (p, _) = crate::gf::prime_power(j.q).ok_or_else(|| Error::Domain("q not a prime power".into()))?;
                let f = Fq::with_modulus(p as u8, m)?;
                if f.q() as u64 != j.q {
                    return domain("modulus degree does not match q");
                }
                f
            }
            None => Fq::standard(j.q)?,
        };
        Curve::new(&fq, [j.a1, j.a2, j.a3, j.a4, j.a6])
    }

    pub fn to_json(&self) -> CurveJson {
        CurveJson {
            q: self.fq.q() as u64,
            modulus: (!self.fq.is_prime_field()).then(|| self.fq.modulus().to_vec()),
            a1: self.a[0],
            a2: self.a[1],
            a3: self.a[2],
            a4: self.a[3],
            a6: self.a[4],
        }
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }
    pub fn q(&self) -> usize {
        self.fq.q()
    }
    pub fn coeffs(&self) -> [u8; 5] {
        self.a
    }
    pub fn a1(&self) -> u8 {
        self.a[0]
    }
    pub fn a2(&self) -> u8 {
        self.a[1]
    }
    pub fn a3(&self) -> u8 {
        self.a[2]
    }
    pub fn a4(&self) -> u8 {
        self.a[3]
    }
    pub fn a6(&self) -> u8 {
        self.a[4]
    }

    pub fn discriminant(&self) -> u8 {
        let f = &self.fq;
        let [a1, a2, a3, a4, a6] = self.a;
        let k = |n: i64| f.from_int(n);
        let m = |x: u8, y: u8| f.mul(x, y);
        let b2 = f.add(m(a1, a1), m(k(4), a2));
        let b4 = f.add(m(k(2), a4), m(a1, a3));
        let b6 = f.add(m(a3, a3), m(k(4), a6));
        let b8 = {
            let t1 = m(m(a1, a1), a6);
            let t2 = m(k(4), m(a2, a6));
            let t3 = m(a1, m(a3, a4));
            let t4 = m(a2, m(a3, a3));
            let t5 = m(a4, a4);
            f.sub(f.add(f.sub(f.add(t1, t2), t3), t4), t5)
        };
        let t1 = f.neg(m(m(b2, b2), b8));
        let t2 = m(k(8), m(b4, m(b4, b4)));
        let t3 = m(k(27), m(b6, b6));
        let t4 = m(k(9), m(b2, m(b4, b6)));
        f.add(f.sub(f.sub(t1, t2), t3), t4)
    }

    /// x³ + a2·x² + a4·x + a6.
    pub fn f_poly(&self) -> Poly {
        Poly::new(vec![self.a[4], self.a[3], self.a[1], 1])
    }
    /// a1·x + a3.
    pub fn h_poly(&self) -> Poly {
        Poly::new(vec![self.a[2], self.a[0]])
    }

    /// Normalized equation `y^2 + a1 xy + a3 y = x^3 + ...`.
    pub fn equation(&self) -> String {
        let f = &self.fq;
        let term = |c: u8, mono: &str| -> Option<String> {
            if c == 0 {
                return None;
            }
            let cs = f.fmt_elem(c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            Some(match (c, mono) {
                (_, "") => cs,
                (1, m) => m.to_string(),
                (_, m) => format!("{cs}{m}"),
            })
        };
        let lhs: Vec<String> =
            [Some("y^2".to_string()), term(self.a[0], "xy"), term(self.a[2], "y")].into_iter().flatten().collect();
        let rhs: Vec<String> = [
            Some("x^3".to_string()),
            term(self.a[1], "x^2"),
            term(self.a[3], "x"),
            term(self.a[4], ""),
        ]
        .into_iter()
        .flatten()
        .collect();
        format!("{} = {}", lhs.join(" + "), rhs.join(" + "))
    }

    fn lift(&self, ext: &ExtField, c: u8) -> ExtElem {
        ext.from_base(c)
    }

    /// W(x, y) = y² + a1xy + a3y − x³ − a2x² − a4x − a6.
    pub fn w(&self, ext: &ExtField, x: &ExtElem, y: &ExtElem) -> ExtElem {
        let h = self.h_at(ext, x);
        let lhs = ext.add(&ext.square(y), &ext.mul(&h, y));
        ext.sub(&lhs, &self.f_at(ext, x))
    }
    /// ∂W/∂x = a1·y − 3x² − 2a2·x − a4.
    pub fn w_x(&self, ext: &ExtField, x: &ExtElem, y: &ExtElem) -> ExtElem {
        let f = &self.fq;
        let t = ext.scale(y, self.a[0]);
        let x2 = ext.square(x);
        let t = ext.sub(&t, &ext.scale(&x2, f.from_int(3)));
        let t = ext.sub(&t, &ext.scale(x, f.mul(f.from_int(2), self.a[1])));
        ext.sub(&t, &self.lift(ext, self.a[3]))
    }
    /// ∂W/∂y = 2y + a1·x + a3.
    pub fn w_y(&self, ext: &ExtField, x: &ExtElem, y: &ExtElem) -> ExtElem {
        ext.add(&ext.scale(y, self.fq.from_int(2)), &self.h_at(ext, x))
    }
    pub fn f_at(&self, ext: &ExtField, x: &ExtElem) -> ExtElem {
        ext.eval_poly(&self.f_poly(), x)
    }
    pub fn h_at(&self, ext: &ExtField, x: &ExtElem) -> ExtElem {
        ext.eval_poly(&self.h_poly(), x)
    }

    pub fn contains(&self, ext: &ExtField, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => self.w(ext, x, y).is_zero(),
        }
    }

    /// The y-coordinates above x (zero, one or two).
    pub fn solve_y(&self, ext: &ExtField, x: &ExtElem) -> Result<Vec<ExtElem>> {
        ext.solve_quadratic(&self.h_at(ext, x), &self.f_at(ext, x))
    }

    /// ȳ = −y − a1·x − a3, the other root above x.
    pub fn conj_y(&self, ext: &ExtField, x: &ExtElem, y: &ExtElem) -> ExtElem {
        ext.sub(&ext.neg(y), &self.h_at(ext, x))
    }

    pub fn neg(&self, ext: &ExtField, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), self.conj_y(ext, x, y)),
        }
    }

    fn check(&self, ext: &ExtField, p: &Point) -> Result<()> {
        if !self.contains(ext, p) {
            return domain("point is not on the curve");
        }
        Ok(())
    }

    /// Chord-tangent addition, valid in every characteristic.
    pub fn add(&self, ext: &ExtField, p: &Point, q: &Point) -> Result<Point> {
        self.check(ext, p)?;
        self.check(ext, q)?;
        Ok(self.add_unchecked(ext, p, q))
    }

    pub(crate) fn add_unchecked(&self, ext: &ExtField, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            let denom = self.w_y(ext, x1, y1);
            // covers both Q = −P and doubling a 2-torsion point
            if y1 != y2 || denom.is_zero() {
                return Point::Infinity;
            }
            // λ = (3x² + 2a2x + a4 − a1y) / (2y + a1x + a3) = −W_x / W_y
            let num = ext.neg(&self.w_x(ext, x1, y1));
            ext.div(&num, &denom).expect("nonzero denominator")
        } else {
            ext.div(&ext.sub(y2, y1), &ext.sub(x2, x1)).expect("distinct x")
        };
        let x3 = {
            let t = ext.add(&ext.square(&lambda), &ext.scale(&lambda, self.a[0]));
            let t = ext.sub(&t, &ext.from_base(self.a[1]));
            ext.sub(&ext.sub(&t, x1), x2)
        };
        // the third intersection has y = λ(x3 − x1) + y1; negate it
        let y_line = ext.add(&ext.mul(&lambda, &ext.sub(&x3, x1)), y1);
        let y3 = self.conj_y(ext, &x3, &y_line);
        Point::Affine(x3, y3)
    }

    pub fn mul(&self, ext: &ExtField, p: &Point, k: i64) -> Result<Point> {
        self.check(ext, p)?;
        let base = if k < 0 { self.neg(ext, p) } else { p.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = Point::Infinity;
        let mut cur = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(ext, &acc, &cur);
            }
            cur = self.add_unchecked(ext, &cur, &cur);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Image of a point over F_q in a larger field (coordinates are constants).
    pub fn embed(&self, from: &ExtField, to: &ExtField, p: &Point) -> Result<Point> {
        match p {
            Point::Infinity => Ok(Point::Infinity),
            Point::Affine(x, y) => {
                let (Some(x), Some(y)) = (from.to_base(x), from.to_base(y)) else {
                    return domain("only F_q-rational points can be embedded");
                };
                Ok(Point::Affine(to.from_base(x), to.from_base(y)))
            }
        }
    }

    pub fn fmt_point(&self, ext: &ExtField, p: &Point) -> String {
        match p {
            Point::Infinity => "P_inf".into(),
            Point::Affine(x, y) => format!("({}, {})", ext.fmt_elem(x), ext.fmt_elem(y)),
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over F_{}", self.equation(), self.fq.q())
    }
}
