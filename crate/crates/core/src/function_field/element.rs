use serde::{Deserialize, Serialize};

use crate::elliptic::Curve;
use crate::error::{domain, Result};
use crate::gf::Poly;

/// (a(x) + b(x)·y) / u(x) in the function field of a curve.
///
/// Kept normalized: gcd(a, b, u) = 1 and u monic. Since F_q[x, y] is free
/// over F_q[x] on {1, y}, this makes the representation unique.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FunctionElement {
    pub a: Poly,
    pub b: Poly,
    pub u: Poly,
}

impl FunctionElement {
    pub fn new(curve: &Curve, a: Poly, b: Poly, u: Poly) -> Result<FunctionElement> {
        if u.is_zero() {
            return domain("zero denominator");
        }
        Ok(FunctionElement { a, b, u }.normalized(curve))
    }

    pub fn constant(c: u8) -> FunctionElement {
        FunctionElement { a: Poly::constant(c), b: Poly::zero(), u: Poly::one() }
    }
    pub fn zero() -> FunctionElement {
        FunctionElement::constant(0)
    }
    pub fn one() -> FunctionElement {
        FunctionElement::constant(1)
    }
    pub fn x() -> FunctionElement {
        FunctionElement { a: Poly::x(), b: Poly::zero(), u: Poly::one() }
    }
    pub fn y() -> FunctionElement {
        FunctionElement { a: Poly::zero(), b: Poly::one(), u: Poly::one() }
    }
    /// A polynomial in x alone.
    pub fn from_poly(p: Poly) -> FunctionElement {
        FunctionElement { a: p, b: Poly::zero(), u: Poly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn normalized(mut self, curve: &Curve) -> FunctionElement {
        let fq = curve.fq();
        if self.is_zero() {
            return FunctionElement::zero();
        }
        let g = self.a.gcd(fq, &self.b).gcd(fq, &self.u);
        if !g.is_one() {
            self.a = self.a.div_exact(fq, &g).expect("gcd divides");
            self.b = self.b.div_exact(fq, &g).expect("gcd divides");
            self.u = self.u.div_exact(fq, &g).expect("gcd divides");
        }
        let lead_inv = fq.inv(self.u.lead()).expect("nonzero denominator");
        FunctionElement {
            a: self.a.scale(fq, lead_inv),
            b: self.b.scale(fq, lead_inv),
            u: self.u.scale(fq, lead_inv),
        }
    }

    pub fn add(&self, curve: &Curve, o: &FunctionElement) -> FunctionElement {
        let fq = curve.fq();
        let a = self.a.mul(fq, &o.u).add(fq, &o.a.mul(fq, &self.u));
        let b = self.b.mul(fq, &o.u).add(fq, &o.b.mul(fq, &self.u));
        FunctionElement { a, b, u: self.u.mul(fq, &o.u) }.normalized(curve)
    }

    pub fn neg(&self, curve: &Curve) -> FunctionElement {
        let fq = curve.fq();
        FunctionElement { a: self.a.neg(fq), b: self.b.neg(fq), u: self.u.clone() }
    }

    pub fn sub(&self, curve: &Curve, o: &FunctionElement) -> FunctionElement {
        self.add(curve, &o.neg(curve))
    }

    pub fn scale(&self, curve: &Curve, c: u8) -> FunctionElement {
        let fq = curve.fq();
        FunctionElement { a: self.a.scale(fq, c), b: self.b.scale(fq, c), u: self.u.clone() }.normalized(curve)
    }

    /// Product, reducing y² = f(x) − h(x)·y.
    pub fn mul(&self, curve: &Curve, o: &FunctionElement) -> FunctionElement {
        let fq = curve.fq();
        let bb = self.b.mul(fq, &o.b);
        let a = self.a.mul(fq, &o.a).add(fq, &bb.mul(fq, &curve.f_poly()));
        let b = self
            .a
            .mul(fq, &o.b)
            .add(fq, &o.a.mul(fq, &self.b))
            .sub(fq, &bb.mul(fq, &curve.h_poly()));
        FunctionElement { a, b, u: self.u.mul(fq, &o.u) }.normalized(curve)
    }

    /// Image under y ↦ ȳ = −y − a1·x − a3.
    pub fn conj(&self, curve: &Curve) -> FunctionElement {
        let fq = curve.fq();
        let a = self.a.sub(fq, &self.b.mul(fq, &curve.h_poly()));
        FunctionElement { a, b: self.b.neg(fq), u: self.u.clone() }
    }

    /// Norm of the numerator a + b·y down to F_q[x]: a² − a·b·h − b²·f.
    pub fn numerator_norm(&self, curve: &Curve) -> Poly {
        let fq = curve.fq();
        let a2 = self.a.mul(fq, &self.a);
        let abh = self.a.mul(fq, &self.b).mul(fq, &curve.h_poly());
        let b2f = self.b.mul(fq, &self.b).mul(fq, &curve.f_poly());
        a2.sub(fq, &abh).sub(fq, &b2f)
    }

    pub fn inv(&self, curve: &Curve) -> Result<FunctionElement> {
        if self.is_zero() {
            return domain("inversion of zero");
        }
        let fq = curve.fq();
        let c = self.conj(curve);
        let n = self.numerator_norm(curve);
        FunctionElement::new(curve, c.a.mul(fq, &self.u), c.b.mul(fq, &self.u), n)
    }

    pub fn pow(&self, curve: &Curve, e: u32) -> FunctionElement {
        (0..e).fold(FunctionElement::one(), |acc, _| acc.mul(curve, self))
    }

    pub fn display(&self, curve: &Curve) -> String {
        let fq = curve.fq();
        let num = match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => "0".to_string(),
            (false, true) => self.a.display(fq, "x"),
            (true, false) => format!("({})y", self.b.display(fq, "x")),
            (false, false) => format!("{} + ({})y", self.a.display(fq, "x"), self.b.display(fq, "x")),
        };
        if self.u.is_one() {
            num
        } else {
            format!("({num}) / ({})", self.u.display(fq, "x"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Fq;

    fn c3() -> Curve {
        Curve::parse(&Fq::prime(3).unwrap(), "y^2 = x^3 + x^2 + 2").unwrap()
    }

    #[test]
    fn y_times_conjugate_is_minus_f() {
        let c = c3();
        let y = FunctionElement::y();
        let p = y.mul(&c, &y.conj(&c));
        let expect = FunctionElement::from_poly(c.f_poly().neg(c.fq()));
        assert_eq!(p, expect);
    }

    #[test]
    fn one_plus_y_times_one_minus_y() {
        let c = c3();
        let fq = c.fq();
        let one = FunctionElement::one();
        let y = FunctionElement::y();
        let p = one.add(&c, &y).mul(&c, &one.sub(&c, &y));
        let expect = FunctionElement::from_poly(Poly::one().sub(fq, &c.f_poly()));
        assert_eq!(p, expect);
    }

    #[test]
    fn inverse_round_trip_char_two() {
        let c = Curve::parse(&Fq::prime(2).unwrap(), "y^2 + xy + x^3 + 1 = 0").unwrap();
        let f = FunctionElement::new(&c, Poly::new(vec![1, 1, 0, 1]), Poly::new(vec![0, 1]), Poly::new(vec![1, 0, 1]))
            .unwrap();
        let g = f.inv(&c).unwrap();
        assert_eq!(f.mul(&c, &g), FunctionElement::one());
        assert!(FunctionElement::zero().inv(&c).is_err());
    }

    #[test]
    fn normalization_cancels_common_factors() {
        let c = c3();
        let fq = c.fq();
        let p = Poly::new(vec![1, 1]);
        let f = FunctionElement::new(&c, p.mul(fq, &p), p.clone(), p.mul(fq, &Poly::new(vec![0, 2]))).unwrap();
        assert_eq!(f.u, Poly::x());
    }
}
