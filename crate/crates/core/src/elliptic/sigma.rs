use super::{Curve, Point};
use crate::error::{Error, Result};
use crate::function_field::{Divisor, Place};
use crate::gf::ExtField;

/// σ(P): the group sum of the conjugates of P's representative, as a point
/// over F_q.
pub fn sigma_place(curve: &Curve, p: &Place) -> Result<Point> {
    let Place::Finite(fp) = p else { return Ok(Point::Infinity) };
    let f = fp.field();
    let (mut x, mut y) = (fp.x().clone(), fp.y().clone());
    let mut acc = Point::Infinity;
    for _ in 0..f.degree() {
        acc = curve.add_unchecked(f, &acc, &Point::Affine(x.clone(), y.clone()));
        x = f.frobenius(&x);
        y = f.frobenius(&y);
    }
    let base = ExtField::base_field(curve.fq());
    match acc {
        Point::Infinity => Ok(Point::Infinity),
        Point::Affine(sx, sy) => match (f.to_base(&sx), f.to_base(&sy)) {
            (Some(a), Some(b)) => Ok(Point::Affine(base.from_base(a), base.from_base(b))),
            _ => Err(Error::Internal("orbit sum is not fixed by Frobenius".into())),
        },
    }
}

/// σ(D) = Σ m_P·σ(P), the rational point with D ~ σ(D) + (deg D − 1)·P_∞.
pub fn sigma(curve: &Curve, d: &Divisor) -> Result<Point> {
    let base = ExtField::base_field(curve.fq());
    let mut acc = Point::Infinity;
    for (p, m) in d.iter() {
        let s = sigma_place(curve, p)?;
        acc = curve.add_unchecked(&base, &acc, &curve.mul(&base, &s, m)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_field::random_place;
    use crate::gf::Fq;

    #[test]
    fn degree_two_place_matches_direct_sum() {
        let c = Curve::parse(&Fq::prime(3).unwrap(), "y^2 = x^3 + 2x^2 + 2").unwrap();
        let f9 = ExtField::standard(c.fq(), 2).unwrap();
        let p = random_place(&c, 2, 3).unwrap();
        let fp = p.finite().unwrap();
        let pt = Point::Affine(fp.x().clone(), fp.y().clone());
        let conj = Point::Affine(f9.frobenius(fp.x()), f9.frobenius(fp.y()));
        let direct = c.add(&f9, &pt, &conj).unwrap();
        let base = ExtField::base_field(c.fq());
        assert_eq!(c.embed(&base, &f9, &sigma_place(&c, &p).unwrap()).unwrap(), direct);
    }

    #[test]
    fn multiples_of_infinity() {
        let c = Curve::parse(&Fq::prime(3).unwrap(), "y^2 = x^3 + x^2 + 2").unwrap();
        assert_eq!(sigma(&c, &Divisor::from_place(Place::Infinity, 5)).unwrap(), Point::Infinity);
    }
}
