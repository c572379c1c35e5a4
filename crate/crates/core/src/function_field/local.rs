//! Valuations, residues and local expansions of function elements.
//!
//! Local parameters: t = x − x₀ at unramified finite places, t = y − y₀ where
//! ∂W/∂y vanishes, and t = −x/y at P_∞.

use serde::Serialize;

use super::element::FunctionElement;
use super::place::{FinitePlace, Place};
use super::series::{self, Series};
use crate::elliptic::Curve;
use crate::error::{domain, Error, Result};
use crate::gf::{ExtElem, ExtField, Fq, Poly};

/// The first `order` coefficients of a local expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetVector {
    pub place: Place,
    pub order: usize,
    pub coeffs: Vec<ExtElem>,
}

#[derive(Serialize)]
struct JetJson<'a> {
    order: usize,
    coeffs: &'a [ExtElem],
}

impl Serialize for JetVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JetJson { order: self.order, coeffs: &self.coeffs }.serialize(s)
    }
}

/// Multiplicity of the irreducible p in g ≠ 0.
pub(crate) fn multiplicity(fq: &Fq, g: &Poly, p: &Poly) -> usize {
    let mut g = g.clone();
    let mut k = 0;
    loop {
        let (q, r) = g.divrem(fq, p).expect("nonzero divisor");
        if !r.is_zero() {
            return k;
        }
        g = q;
        k += 1;
    }
}

/// x(t) and y(t) at a finite place, each to `prec` terms.
pub(crate) fn finite_coords(curve: &Curve, p: &FinitePlace, prec: usize) -> (Series, Series) {
    let f = p.field();
    let (x0, y0) = (p.x().clone(), p.y().clone());
    let lin = |c: ExtElem, k: usize| {
        let mut s = series::constant(f, c, k);
        if k > 1 {
            s[1] = f.one();
        }
        s
    };
    // Newton lifting of the dependent coordinate, doubling precision each step.
    let mut dep = series::constant(f, if p.is_ramified() { x0.clone() } else { y0.clone() }, 1);
    let mut k = 1;
    while k < prec {
        k = (2 * k).min(prec);
        dep.resize(k, f.zero());
        let (x, y) = if p.is_ramified() { (dep.clone(), lin(y0.clone(), k)) } else { (lin(x0.clone(), k), dep.clone()) };
        let w = w_series(curve, f, &x, &y, k);
        let dw = if p.is_ramified() { wx_series(curve, f, &x, &y, k) } else { wy_series(curve, f, &x, &y, k) };
        let step = series::mul(f, &w, &series::inv(f, &dw, k), k);
        dep = series::sub(f, &dep, &step);
    }
    dep.resize(prec, f.zero());
    if p.is_ramified() {
        (dep, lin(y0, prec))
    } else {
        (lin(x0, prec), dep)
    }
}

fn w_series(curve: &Curve, f: &ExtField, x: &[ExtElem], y: &[ExtElem], k: usize) -> Series {
    let h = series::compose(f, &curve.h_poly(), x, k);
    let rhs = series::compose(f, &curve.f_poly(), x, k);
    let lhs = series::mul(f, y, &series::add(f, y, &h), k);
    series::sub(f, &lhs, &rhs)
}

fn wy_series(curve: &Curve, f: &ExtField, x: &[ExtElem], y: &[ExtElem], k: usize) -> Series {
    let h = series::compose(f, &curve.h_poly(), x, k);
    series::add(f, &series::scale_base(f, y, curve.fq().from_int(2)), &h)
}

fn wx_series(curve: &Curve, f: &ExtField, x: &[ExtElem], y: &[ExtElem], k: usize) -> Series {
    let df = curve.f_poly().derivative(curve.fq());
    series::sub(f, &series::scale_base(f, y, curve.a1()), &series::compose(f, &df, x, k))
}

/// Expansion data at a finite place, reused across many functions.
pub(crate) struct FiniteLocal<'a> {
    curve: &'a Curve,
    place: &'a FinitePlace,
    x: Series,
    y: Series,
}

impl<'a> FiniteLocal<'a> {
    pub(crate) fn new(curve: &'a Curve, place: &'a FinitePlace, prec: usize) -> FiniteLocal<'a> {
        let (x, y) = finite_coords(curve, place, prec.max(1));
        FiniteLocal { curve, place, x, y }
    }

    fn ensure(&mut self, prec: usize) {
        if self.x.len() < prec {
            let (x, y) = finite_coords(self.curve, self.place, prec.max(2 * self.x.len()));
            self.x = x;
            self.y = y;
        }
    }

    fn e(&self) -> i64 {
        if self.place.is_ramified() {
            2
        } else {
            1
        }
    }

    /// p(x(t)) to `prec` terms.
    pub(crate) fn poly(&mut self, p: &Poly, prec: usize) -> Series {
        let f = self.place.field();
        if self.place.is_ramified() {
            self.ensure(prec);
            series::compose(f, p, &self.x[..prec], prec)
        } else {
            series::compose_linear(f, p, self.place.x(), prec)
        }
    }

    pub(crate) fn y_series(&mut self, prec: usize) -> Series {
        self.ensure(prec);
        self.y[..prec].to_vec()
    }

    /// a(x(t)) + b(x(t))·y(t) to `prec` terms.
    fn numerator(&mut self, g: &FunctionElement, prec: usize) -> Series {
        self.ensure(prec);
        let f = self.place.field();
        let a = self.poly(&g.a, prec);
        if g.b.is_zero() {
            return a;
        }
        let b = self.poly(&g.b, prec);
        series::add(f, &a, &series::mul(f, &b, &self.y[..prec], prec))
    }

    fn numerator_valuation(&mut self, g: &FunctionElement) -> i64 {
        let fq = self.curve.fq();
        // v_P(N) ≤ v_P(N·N̄) = e·ord_p(norm), which is exact arithmetic over F_q
        let cap = self.e() * multiplicity(fq, &g.numerator_norm(self.curve), self.place.x_poly()) as i64;
        if cap == 0 {
            return 0;
        }
        let n = self.numerator(g, cap as usize + 1);
        series::order(&n).expect("valuation bounded by the norm") as i64
    }

    fn denominator_valuation(&self, g: &FunctionElement) -> i64 {
        self.e() * multiplicity(self.curve.fq(), &g.u, self.place.x_poly()) as i64
    }

    pub(crate) fn valuation(&mut self, g: &FunctionElement) -> i64 {
        self.numerator_valuation(g) - self.denominator_valuation(g)
    }

    pub(crate) fn expand(&mut self, g: &FunctionElement, order: usize) -> Result<Series> {
        let f = self.place.field().clone();
        if g.is_zero() {
            return Ok(vec![f.zero(); order]);
        }
        let vu = self.denominator_valuation(g) as usize;
        if vu == 0 {
            let n = self.numerator(g, order);
            let u = self.poly(&g.u, order);
            return Ok(series::mul(&f, &n, &series::inv(&f, &u, order), order));
        }
        let v = self.valuation(g);
        if v < 0 {
            return Err(Error::Domain(format!("pole of order {} at the place (valuation {v})", -v)));
        }
        let prec = order + vu;
        let n = self.numerator(g, prec);
        let u = self.poly(&g.u, prec);
        Ok(series::mul(&f, &n[vu..], &series::inv(&f, &u[vu..], order), order))
    }
}

/// Weierstrass data for expansions at P_∞ in z = −x/y.
struct InfinityLocal {
    f: ExtField,
    /// w/z³ where w = −1/y, to the stored precision.
    wt: Series,
}

impl InfinityLocal {
    fn new(curve: &Curve, prec: usize) -> InfinityLocal {
        let f = ExtField::base_field(curve.fq());
        let prec = prec.max(1);
        let [a1, a2, a3, a4, a6] = curve.coeffs();
        // W̃ = 1 + a1 z W̃ + a2 z² W̃ + a3 z³ W̃² + a4 z⁴ W̃² + a6 z⁶ W̃³
        let mut wt = series::constant(&f, f.one(), prec);
        for _ in 0..prec {
            let w2 = series::mul(&f, &wt, &wt, prec);
            let w3 = series::mul(&f, &w2, &wt, prec);
            let mut next = series::constant(&f, f.one(), prec);
            for (c, k, s) in [(a1, 1, &wt), (a2, 2, &wt), (a3, 3, &w2), (a4, 4, &w2), (a6, 6, &w3)] {
                if c != 0 {
                    next = series::add(&f, &next, &series::shift_up(&f, &series::scale_base(&f, s, c), k, prec));
                }
            }
            wt = next;
        }
        InfinityLocal { f, wt }
    }

    fn valuation(g: &FunctionElement) -> i64 {
        2 * g.u.deg_i() - pole_order(g)
    }

    /// Unit part of g at P_∞: g = z^v · G(z). Returns G mod z^prec.
    fn unit(&self, g: &FunctionElement, prec: usize) -> Series {
        let f = &self.f;
        let wt = &self.wt[..prec];
        let wti = series::inv(f, wt, prec);
        let s = series::shift_up(f, wt, 2, prec);
        let rev = |p: &Poly| Poly::new(p.coeffs().iter().rev().copied().collect());
        let vmax = pole_order(g);
        let mut bracket = vec![f.zero(); prec];
        if let Some(da) = g.a.degree() {
            let t = series::mul(f, &series::pow(f, &wti, da, prec), &series::compose(f, &rev(&g.a), &s, prec), prec);
            bracket = series::add(f, &bracket, &series::shift_up(f, &t, vmax as usize - 2 * da, prec));
        }
        if let Some(db) = g.b.degree() {
            let t = series::mul(f, &series::pow(f, &wti, db + 1, prec), &series::compose(f, &rev(&g.b), &s, prec), prec);
            bracket = series::sub(f, &bracket, &series::shift_up(f, &t, vmax as usize - 2 * db - 3, prec));
        }
        let du = g.u.degree().expect("nonzero denominator");
        let den = series::compose(f, &rev(&g.u), &s, prec);
        let num = series::mul(f, &bracket, &series::pow(f, wt, du, prec), prec);
        series::mul(f, &num, &series::inv(f, &den, prec), prec)
    }
}

/// max(2·deg a, 2·deg b + 3): the pole order of the numerator at P_∞.
fn pole_order(g: &FunctionElement) -> i64 {
    let pa = g.a.degree().map_or(i64::MIN, |d| 2 * d as i64);
    let pb = g.b.degree().map_or(i64::MIN, |d| 2 * d as i64 + 3);
    pa.max(pb)
}

/// Pole order of g at P_∞ as a nonnegative count (0 for regular g).
pub fn pole_order_at_infinity(g: &FunctionElement) -> i64 {
    if g.is_zero() {
        return 0;
    }
    (-InfinityLocal::valuation(g)).max(0)
}

pub fn valuation(curve: &Curve, g: &FunctionElement, p: &Place) -> Result<i64> {
    if g.is_zero() {
        return domain("valuation of the zero function");
    }
    Ok(match p {
        Place::Infinity => InfinityLocal::valuation(g),
        Place::Finite(fp) => FiniteLocal::new(curve, fp, 1).valuation(g),
    })
}

pub fn local_expansion(curve: &Curve, g: &FunctionElement, p: &Place, order: usize) -> Result<JetVector> {
    let coeffs = match p {
        Place::Finite(fp) => FiniteLocal::new(curve, fp, order).expand(g, order)?,
        Place::Infinity => infinity_expansion(curve, g, order)?,
    };
    Ok(JetVector { place: p.clone(), order, coeffs })
}

fn infinity_expansion(curve: &Curve, g: &FunctionElement, order: usize) -> Result<Series> {
    let f = ExtField::base_field(curve.fq());
    if g.is_zero() {
        return Ok(vec![f.zero(); order]);
    }
    let v = InfinityLocal::valuation(g);
    if v < 0 {
        return Err(Error::Domain(format!("pole of order {} at P_inf (valuation {v})", -v)));
    }
    let v = v as usize;
    if order <= v {
        return Ok(vec![f.zero(); order]);
    }
    let r = order - v;
    let unit = InfinityLocal::new(curve, r).unit(g, r);
    Ok(series::shift_up(&f, &unit, v, order))
}

/// Jets of several functions at one place, sharing the local coordinates.
pub fn local_expansions(curve: &Curve, gs: &[FunctionElement], p: &Place, order: usize) -> Result<Vec<JetVector>> {
    match p {
        Place::Finite(fp) => {
            let mut loc = FiniteLocal::new(curve, fp, order);
            gs.iter()
                .map(|g| Ok(JetVector { place: p.clone(), order, coeffs: loc.expand(g, order)? }))
                .collect()
        }
        Place::Infinity => gs.iter().map(|g| local_expansion(curve, g, p, order)).collect(),
    }
}

/// The residue f(P) at the place's representative point.
pub fn evaluate(curve: &Curve, g: &FunctionElement, p: &Place) -> Result<ExtElem> {
    if let Place::Finite(fp) = p {
        let f = fp.field();
        let u = f.eval_poly(&g.u, fp.x());
        if !u.is_zero() {
            let n = f.add(&f.eval_poly(&g.a, fp.x()), &f.mul(&f.eval_poly(&g.b, fp.x()), fp.y()));
            return f.div(&n, &u);
        }
    }
    Ok(local_expansion(curve, g, p, 1)?.coeffs.remove(0))
}
