use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::elliptic::{Curve, Point};
use crate::error::{domain, Error, Result};
use crate::gf::{ExtElem, ExtField, Poly};
use crate::linalg::Matrix;

/// A finite place: the Frobenius orbit of a point over F_{q^d}, stored by a
/// canonical representative (the orbit minimum).
pub struct FinitePlace {
    field: ExtField,
    x: ExtElem,
    y: ExtElem,
    x_poly: Poly,
    /// y₀ = v(x₀) when x₀ generates the residue field.
    y_poly: Option<Poly>,
    ramified: bool,
}

impl FinitePlace {
    /// Residue field F_{q^d}.
    pub fn field(&self) -> &ExtField {
        &self.field
    }
    pub fn x(&self) -> &ExtElem {
        &self.x
    }
    pub fn y(&self) -> &ExtElem {
        &self.y
    }
    /// Minimal polynomial of x₀ over F_q.
    pub fn x_poly(&self) -> &Poly {
        &self.x_poly
    }
    /// True when ∂W/∂y vanishes, so y − y₀ is the local parameter.
    pub fn is_ramified(&self) -> bool {
        self.ramified
    }

    /// Ideal form (p(x), y − v(x)): v is absent when x₀ has degree d/2, in
    /// which case p alone determines the place.
    pub fn y_poly(&self) -> Option<&Poly> {
        self.y_poly.as_ref()
    }

    /// Identity of the place independent of the residue field model.
    fn key(&self) -> (usize, &Poly, Option<&Poly>) {
        (self.field.degree(), &self.x_poly, self.y_poly.as_ref())
    }
}

#[derive(Clone)]
pub enum Place {
    Infinity,
    Finite(Arc<FinitePlace>),
}

impl Place {
    /// The place through (x, y) ∈ C(field). The point must not lie in a
    /// proper subfield.
    pub fn from_point(curve: &Curve, field: &ExtField, x: &ExtElem, y: &ExtElem) -> Result<Place> {
        if !curve.w(field, x, y).is_zero() {
            return domain("point is not on the curve");
        }
        let d = field.degree();
        let mut best = (x.clone(), y.clone());
        let (mut cx, mut cy) = (field.frobenius(x), field.frobenius(y));
        let mut size = 1;
        while (&cx, &cy) != (x, y) {
            if (&cx, &cy) < (&best.0, &best.1) {
                best = (cx.clone(), cy.clone());
            }
            cx = field.frobenius(&cx);
            cy = field.frobenius(&cy);
            size += 1;
        }
        if size != d {
            return domain(format!("point generates a field of degree {size}, not {d}"));
        }
        let (x, y) = best;
        let ramified = curve.w_y(field, &x, &y).is_zero();
        let x_poly = field.min_poly(&x);
        let y_poly = if x_poly.degree() == Some(d) { Some(express_in_powers(field, &x, &y)?) } else { None };
        Ok(Place::Finite(Arc::new(FinitePlace { field: field.clone(), x, y, x_poly, y_poly, ramified })))
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Infinity => 1,
            Place::Finite(p) => p.field.degree(),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    pub fn finite(&self) -> Option<&FinitePlace> {
        match self {
            Place::Infinity => None,
            Place::Finite(p) => Some(p),
        }
    }

    /// Degree of the x-coordinate's minimal polynomial (1 at P_∞ by convention).
    pub fn x_degree(&self) -> usize {
        self.finite().map_or(1, |p| p.x_poly.degree().unwrap_or(0))
    }

    /// The conjugate place (x₀, ȳ₀); equal to self when ramified.
    pub fn conjugate(&self, curve: &Curve) -> Result<Place> {
        match self {
            Place::Infinity => Ok(Place::Infinity),
            Place::Finite(p) => {
                let yb = curve.conj_y(&p.field, &p.x, &p.y);
                Place::from_point(curve, &p.field, &p.x, &yb)
            }
        }
    }

    /// The representative as a point over the residue field.
    pub fn point(&self) -> Point {
        match self {
            Place::Infinity => Point::Infinity,
            Place::Finite(p) => Point::Affine(p.x.clone(), p.y.clone()),
        }
    }

    /// Residue field of the place (F_q itself for P_∞).
    pub fn residue_field(&self, curve: &Curve) -> ExtField {
        match self {
            Place::Infinity => ExtField::base_field(curve.fq()),
            Place::Finite(p) => p.field.clone(),
        }
    }

    pub fn to_json(&self) -> PlaceJson {
        match self {
            Place::Infinity => PlaceJson { infinity: true, ..PlaceJson::default() },
            Place::Finite(p) => PlaceJson {
                infinity: false,
                degree: Some(p.field.degree()),
                modulus: Some(p.field.modulus().coeffs().to_vec()),
                x0: Some(p.x.coeffs().to_vec()),
                y0: Some(p.y.coeffs().to_vec()),
            },
        }
    }

    pub fn from_json(curve: &Curve, j: &PlaceJson) -> Result<Place> {
        if j.infinity {
            return Ok(Place::Infinity);
        }
        let (Some(d), Some(m), Some(x0), Some(y0)) = (j.degree, &j.modulus, &j.x0, &j.y0) else {
            return Err(Error::Parse("finite place needs degree, modulus, x0 and y0".into()));
        };
        let field = ExtField::new(curve.fq(), Poly::new(m.clone()))?;
        if field.degree() != d {
            return Err(Error::Parse("place degree does not match its modulus".into()));
        }
        Place::from_point(curve, &field, &field.elem(x0)?, &field.elem(y0)?)
    }

    pub fn display(&self) -> String {
        match self {
            Place::Infinity => "P_inf".into(),
            Place::Finite(p) => format!("({}, {})", p.field.fmt_elem(&p.x), p.field.fmt_elem(&p.y)),
        }
    }
}

/// v with y = v(x) for a generator x of the field.
fn express_in_powers(field: &ExtField, x: &ExtElem, y: &ExtElem) -> Result<Poly> {
    let d = field.degree();
    let mut cols = Vec::with_capacity(d);
    let mut p = field.one();
    for _ in 0..d {
        cols.push(p.coeffs().to_vec());
        p = field.mul(&p, x);
    }
    let m = Matrix::from_cols(&cols)?;
    Ok(Poly::new(m.solve(field.base(), y.coeffs())?))
}

impl PartialEq for Place {
    fn eq(&self, o: &Place) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Place {}
impl PartialOrd for Place {
    fn partial_cmp(&self, o: &Place) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Place {
    fn cmp(&self, o: &Place) -> Ordering {
        match (self, o) {
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
            (Place::Infinity, _) => Ordering::Less,
            (_, Place::Infinity) => Ordering::Greater,
            (Place::Finite(a), Place::Finite(b)) => a.key().cmp(&b.key()),
        }
    }
}
impl Hash for Place {
    fn hash<H: Hasher>(&self, h: &mut H) {
        match self {
            Place::Infinity => 0u8.hash(h),
            Place::Finite(p) => p.key().hash(h),
        }
    }
}
impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceJson {
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub infinity: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y0: Option<Vec<u8>>,
}

/// Retry budget for [`random_place`].
pub const PLACE_ATTEMPTS: usize = 10_000;

/// Samples a place of degree d whose x-coordinate has full degree d.
pub fn random_place(curve: &Curve, d: usize, seed: u64) -> Result<Place> {
    let field = if d == 1 { ExtField::base_field(curve.fq()) } else { ExtField::standard(curve.fq(), d)? };
    random_place_in(curve, &field, seed)
}

/// As [`random_place`], with an explicit residue field.
pub fn random_place_in(curve: &Curve, field: &ExtField, seed: u64) -> Result<Place> {
    let d = field.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..PLACE_ATTEMPTS {
        let x = field.random_elem(&mut rng);
        let ys = curve.solve_y(field, &x)?;
        if ys.is_empty() {
            continue;
        }
        let y = ys[rng.gen_range(0..ys.len())].clone();
        if field.min_poly(&x).degree() != Some(d) {
            continue;
        }
        return Place::from_point(curve, field, &x, &y);
    }
    Err(Error::Construction(format!("no place of degree {d} found after {PLACE_ATTEMPTS} attempts")))
}

/// Every place of degree d (P_∞ included when d = 1), by orbit enumeration.
pub fn enumerate_places(curve: &Curve, d: usize) -> Result<Vec<Place>> {
    let field = if d == 1 { ExtField::base_field(curve.fq()) } else { ExtField::standard(curve.fq(), d)? };
    let mut out = BTreeSet::new();
    if d == 1 {
        out.insert(Place::Infinity);
    }
    let mut seen = HashSet::new();
    for p in curve.points_over(&field)? {
        let Point::Affine(x, y) = p else { continue };
        if seen.contains(&(x.clone(), y.clone())) {
            continue;
        }
        let (mut cx, mut cy) = (x.clone(), y.clone());
        let mut size = 0;
        loop {
            seen.insert((cx.clone(), cy.clone()));
            cx = field.frobenius(&cx);
            cy = field.frobenius(&cy);
            size += 1;
            if cx == x && cy == y {
                break;
            }
        }
        if size == d {
            out.insert(Place::from_point(curve, &field, &x, &y)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// A finite formal sum of places with nonzero integer multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Divisor(BTreeMap<Place, i64>);

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn from_place(p: Place, m: i64) -> Divisor {
        let mut d = Divisor::zero();
        d.add_place(p, m);
        d
    }

    pub fn add_place(&mut self, p: Place, m: i64) {
        let e = self.0.entry(p.clone()).or_insert(0);
        *e += m;
        if *e == 0 {
            self.0.remove(&p);
        }
    }

    pub fn mult(&self, p: &Place) -> i64 {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(p, m)| m * p.degree() as i64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.0.values().all(|&m| m > 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.0.iter().map(|(p, &m)| (p, m))
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.0.keys()
    }

    pub fn disjoint(&self, o: &Divisor) -> bool {
        self.0.keys().all(|p| !o.0.contains_key(p))
    }

    pub fn add(&self, o: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, m) in o.iter() {
            out.add_place(p.clone(), m);
        }
        out
    }

    pub fn scale(&self, k: i64) -> Divisor {
        let mut out = Divisor::zero();
        for (p, m) in self.iter() {
            out.add_place(p.clone(), m * k);
        }
        out
    }

    pub fn sub(&self, o: &Divisor) -> Divisor {
        self.add(&o.scale(-1))
    }

    pub fn to_json(&self) -> Vec<DivisorTerm> {
        self.iter().map(|(p, m)| DivisorTerm { place: p.to_json(), mult: m }).collect()
    }

    pub fn from_json(curve: &Curve, terms: &[DivisorTerm]) -> Result<Divisor> {
        let mut d = Divisor::zero();
        for t in terms {
            d.add_place(Place::from_json(curve, &t.place)?, t.mult);
        }
        Ok(d)
    }
}

impl FromIterator<(Place, i64)> for Divisor {
    fn from_iter<I: IntoIterator<Item = (Place, i64)>>(it: I) -> Divisor {
        let mut d = Divisor::zero();
        for (p, m) in it {
            d.add_place(p, m);
        }
        d
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.iter().map(|(p, m)| format!("{m}*[deg {} {}]", p.degree(), p.display())).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorTerm {
    pub place: PlaceJson,
    pub mult: i64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::zeta_counts;
    use crate::gf::Fq;

    fn c3() -> Curve {
        Curve::parse(&Fq::prime(3).unwrap(), "y^2 = x^3 + x^2 + 2").unwrap()
    }

    #[test]
    fn enumeration_matches_zeta() {
        let c = c3();
        let z = zeta_counts(&c, 4).unwrap();
        for d in 1..=4 {
            assert_eq!(enumerate_places(&c, d).unwrap().len() as i128, z.b_d(d));
        }
    }

    #[test]
    fn random_place_is_canonical_and_full_degree() {
        let c = c3();
        let places = enumerate_places(&c, 2).unwrap();
        for seed in 0..10 {
            let p = random_place(&c, 2, seed).unwrap();
            assert!(places.contains(&p));
            assert_eq!(p.x_degree(), 2);
            assert_eq!(random_place(&c, 2, seed).unwrap(), p);
        }
    }

    #[test]
    fn divisor_arithmetic() {
        let c = c3();
        let p = random_place(&c, 3, 1).unwrap();
        let d = Divisor::from_place(p.clone(), 2).add(&Divisor::from_place(Place::Infinity, 1));
        assert_eq!(d.degree(), 7);
        assert!(d.is_effective());
        assert!(d.sub(&d).is_zero());
        let back = Divisor::from_json(&c, &d.to_json()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn identity_does_not_depend_on_field_model() {
        let c = c3();
        let std = ExtField::standard(c.fq(), 3).unwrap();
        let other = ExtField::random(c.fq(), 3, 11).unwrap();
        assert_ne!(std.modulus(), other.modulus());
        let p = random_place_in(&c, &std, 2).unwrap();
        let fp = p.finite().unwrap();
        // carry the point over through a root of std's modulus in `other`
        let root = (0..other.order_u64().unwrap())
            .map(|i| other.from_index(i))
            .find(|r| other.eval_poly(std.modulus(), r).is_zero())
            .unwrap();
        let x = other.eval_poly(&fp.x().to_poly(), &root);
        let y = other.eval_poly(&fp.y().to_poly(), &root);
        let q = Place::from_point(&c, &other, &x, &y).unwrap();
        assert_eq!(p, q);
        assert_ne!(p, p.conjugate(&c).unwrap());
    }

    #[test]
    fn subfield_point_is_rejected() {
        let c = c3();
        let f9 = ExtField::standard(c.fq(), 2).unwrap();
        let pts = c.points_over(&f9).unwrap();
        let rational = pts
            .iter()
            .find_map(|p| match p {
                Point::Affine(x, y) if f9.to_base(x).is_some() && f9.to_base(y).is_some() => Some((x, y)),
                _ => None,
            })
            .unwrap();
        assert!(Place::from_point(&c, &f9, rational.0, rational.1).is_err());
    }
}
