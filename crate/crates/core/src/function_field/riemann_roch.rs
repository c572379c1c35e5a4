use std::collections::BTreeMap;

use super::element::FunctionElement;
use super::local::{pole_order_at_infinity, FiniteLocal};
use super::place::{Divisor, Place};
use super::series;
use crate::elliptic::{sigma, Curve, Point};
use crate::error::{domain, Error, Result};
use crate::gf::Poly;
use crate::linalg::Matrix;

/// Ansatz monomial: x^i, times y when the flag is set.
type Monomial = (bool, usize);

/// Linear description of L(D) inside {(a + b·y)/u : deg a ≤ A, deg b ≤ B}.
struct Ansatz {
    u: Poly,
    /// Columns in increasing pole order at P_∞.
    cols: Vec<Monomial>,
    conditions: Matrix,
}

impl Ansatz {
    fn new(curve: &Curve, d: &Divisor) -> Result<Ansatz> {
        let fq = curve.fq();
        if !d.is_effective() || d.degree() < 1 {
            return domain(format!("Riemann-Roch basis needs an effective divisor of degree >= 1, got {d}"));
        }
        let n_inf = d.mult(&Place::Infinity);
        let mut groups: BTreeMap<Poly, Vec<(Place, i64)>> = BTreeMap::new();
        for (p, m) in d.iter() {
            if let Some(fp) = p.finite() {
                if p.x_degree() != p.degree() {
                    return domain("place whose x-coordinate does not generate its residue field");
                }
                groups.entry(fp.x_poly().clone()).or_default().push((p.clone(), m));
            }
        }
        // (place, required order of vanishing of a + b·y)
        let mut conds: Vec<(Place, usize)> = Vec::new();
        let mut u = Poly::one();
        for (px, members) in &groups {
            let p = members[0].0.clone();
            let pbar = p.conjugate(curve)?;
            let e = if p == pbar {
                let m = members[0].1;
                let e = (m + 1) / 2;
                if 2 * e > m {
                    conds.push((p, (2 * e - m) as usize));
                }
                e
            } else {
                let mp = d.mult(&p);
                let mb = d.mult(&pbar);
                let e = mp.max(mb);
                for (pl, m) in [(p, mp), (pbar, mb)] {
                    if e > m {
                        conds.push((pl, (e - m) as usize));
                    }
                }
                e
            };
            u = u.mul(fq, &px.pow(fq, e as u32));
        }
        let two_m = 2 * u.deg_i() + n_inf;
        let mut cols = Vec::new();
        for k in 0..=two_m {
            if k % 2 == 0 {
                cols.push((false, (k / 2) as usize));
            } else if k >= 3 {
                cols.push((true, ((k - 3) / 2) as usize));
            }
        }
        let mut rows: Vec<Vec<u8>> = Vec::new();
        for (place, k) in &conds {
            let fp = place.finite().expect("finite condition place");
            let f = fp.field();
            let mut loc = FiniteLocal::new(curve, fp, *k);
            let xs = loc.poly(&Poly::x(), *k);
            let ys = loc.y_series(*k);
            let max_i = cols.iter().map(|m| m.1).max().unwrap_or(0);
            let mut xpow = Vec::with_capacity(max_i + 1);
            xpow.push(series::constant(f, f.one(), *k));
            for i in 1..=max_i {
                xpow.push(series::mul(f, &xpow[i - 1], &xs, *k));
            }
            let col_series: Vec<_> = cols
                .iter()
                .map(|&(has_y, i)| if has_y { series::mul(f, &xpow[i], &ys, *k) } else { xpow[i].clone() })
                .collect();
            for l in 0..*k {
                for c in 0..f.degree() {
                    rows.push(col_series.iter().map(|s| s[l].coeffs()[c]).collect());
                }
            }
        }
        let conditions = if rows.is_empty() { Matrix::zeros(0, cols.len()) } else { Matrix::from_rows(&rows)? };
        Ok(Ansatz { u, cols, conditions })
    }

    fn to_element(&self, curve: &Curve, v: &[u8]) -> FunctionElement {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (&(has_y, i), &c) in self.cols.iter().zip(v) {
            let t = if has_y { &mut b } else { &mut a };
            if t.len() <= i {
                t.resize(i + 1, 0);
            }
            t[i] = c;
        }
        FunctionElement::new(curve, Poly::new(a), Poly::new(b), self.u.clone()).expect("u is nonzero")
    }

    /// Coordinates of g in the ansatz, if g has the ansatz shape.
    fn to_vector(&self, curve: &Curve, g: &FunctionElement) -> Option<Vec<u8>> {
        let fq = curve.fq();
        let (k, r) = self.u.divrem(fq, &g.u).ok()?;
        if !r.is_zero() {
            return None;
        }
        let a = g.a.mul(fq, &k);
        let b = g.b.mul(fq, &k);
        let cap = |has_y: bool| self.cols.iter().filter(|m| m.0 == has_y).map(|m| m.1 as i64).max().unwrap_or(-1);
        if a.deg_i() > cap(false) || b.deg_i() > cap(true) {
            return None;
        }
        Some(self.cols.iter().map(|&(has_y, i)| if has_y { b.coeff(i) } else { a.coeff(i) }).collect())
    }
}

/// Echelon rows of `vs` with pivots taken from the highest pole order down,
/// returned in increasing pole order.
fn graded_echelon(curve: &Curve, vs: &[Vec<u8>], ncols: usize) -> Vec<Vec<u8>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let rev: Vec<Vec<u8>> = vs.iter().map(|v| v.iter().rev().copied().collect()).collect();
    let m = Matrix::from_rows(&rev).expect("rectangular");
    let (r, pivots) = m.rref(curve.fq());
    let mut out: Vec<Vec<u8>> = (0..pivots.len()).map(|i| r.row(i).iter().rev().copied().collect()).collect();
    out.reverse();
    debug_assert!(out.iter().all(|v| v.len() == ncols));
    out
}

/// Basis of L(D) for effective D of positive degree.
///
/// With `extend`, the given functions (which must lie in L(D) and be
/// independent) come first, unchanged, and are completed to a basis.
pub fn riemann_roch_basis(curve: &Curve, d: &Divisor, extend: Option<&[FunctionElement]>) -> Result<Vec<FunctionElement>> {
    let fq = curve.fq();
    let ans = Ansatz::new(curve, d)?;
    let ncols = ans.cols.len();
    let null = ans.conditions.nullspace(fq);
    if null.len() as i64 != d.degree() {
        return Err(Error::Internal(format!("dim L(D) came out {} for deg D = {}", null.len(), d.degree())));
    }
    let Some(prior) = extend else {
        return Ok(graded_echelon(curve, &null, ncols).iter().map(|v| ans.to_element(curve, v)).collect());
    };
    // Reduce the nullspace against the prior vectors, keep what is new.
    let mut prior_vs = Vec::with_capacity(prior.len());
    for g in prior {
        let v = ans.to_vector(curve, g).ok_or_else(|| Error::Domain("extension element is not in the ansatz".into()))?;
        if ans.conditions.mul_vec(fq, &v)?.iter().any(|&c| c != 0) {
            return domain("extension element does not lie in L(D)");
        }
        prior_vs.push(v);
    }
    let mut echelon = Echelon::new(fq.clone(), ncols);
    for v in &prior_vs {
        if !echelon.insert(v) {
            return domain("extension elements are linearly dependent");
        }
    }
    let mut fresh = Vec::new();
    for v in &null {
        if echelon.insert(v) {
            fresh.push(v.clone());
        }
    }
    let mut out: Vec<FunctionElement> = prior.to_vec();
    out.extend(graded_echelon(curve, &fresh, ncols).iter().map(|v| ans.to_element(curve, v)));
    Ok(out)
}

/// Incremental row echelon form for independence tests.
struct Echelon {
    fq: crate::gf::Fq,
    rows: Vec<(usize, Vec<u8>)>,
    ncols: usize,
}

impl Echelon {
    fn new(fq: crate::gf::Fq, ncols: usize) -> Echelon {
        Echelon { fq, rows: Vec::new(), ncols }
    }

    /// Adds v if independent of the rows so far; reports whether it was.
    fn insert(&mut self, v: &[u8]) -> bool {
        let f = &self.fq;
        let mut w = v.to_vec();
        for (p, r) in &self.rows {
            let c = w[*p];
            if c != 0 {
                for j in 0..self.ncols {
                    w[j] = f.sub(w[j], f.mul(c, r[j]));
                }
            }
        }
        let Some(p) = w.iter().position(|&c| c != 0) else { return false };
        let inv = f.inv(w[p]).expect("nonzero");
        for c in &mut w {
            *c = f.mul(*c, inv);
        }
        for (_, r) in &mut self.rows {
            let c = r[p];
            if c != 0 {
                for j in 0..self.ncols {
                    r[j] = f.sub(r[j], f.mul(c, w[j]));
                }
            }
        }
        self.rows.push((p, w));
        true
    }
}

/// ℓ(D) on a genus-1 curve.
pub fn dimension(curve: &Curve, d: &Divisor) -> Result<i64> {
    Ok(match d.degree() {
        n if n > 0 => n,
        0 => i64::from(sigma(curve, d)? == Point::Infinity),
        _ => 0,
    })
}

/// i(D) = ℓ(D) − deg D + g − 1 with g = 1.
pub fn speciality_index(curve: &Curve, d: &Divisor) -> Result<i64> {
    Ok(dimension(curve, d)? - d.degree())
}

/// Largest pole order at P_∞ over a set of functions.
pub fn max_pole_at_infinity(fs: &[FunctionElement]) -> i64 {
    fs.iter().map(pole_order_at_infinity).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_field::local::valuation;
    use crate::function_field::place::{random_place, Place};
    use crate::gf::Fq;

    fn c3() -> Curve {
        Curve::parse(&Fq::prime(3).unwrap(), "y^2 = x^3 + x^2 + 2").unwrap()
    }

    #[test]
    fn classical_spaces_at_infinity() {
        let c = c3();
        let two = riemann_roch_basis(&c, &Divisor::from_place(Place::Infinity, 2), None).unwrap();
        assert_eq!(two, vec![FunctionElement::one(), FunctionElement::x()]);
        let three = riemann_roch_basis(&c, &Divisor::from_place(Place::Infinity, 3), None).unwrap();
        assert_eq!(three, vec![FunctionElement::one(), FunctionElement::x(), FunctionElement::y()]);
    }

    #[test]
    fn basis_respects_divisor() {
        let c = c3();
        let p = random_place(&c, 3, 2).unwrap();
        let q = random_place(&c, 1, 5).unwrap();
        let d = Divisor::from_place(p.clone(), 2).add(&Divisor::from_place(q.clone(), 1));
        let basis = riemann_roch_basis(&c, &d, None).unwrap();
        assert_eq!(basis.len(), 7);
        for f in &basis {
            assert!(valuation(&c, f, &p).unwrap() >= -2);
            assert!(valuation(&c, f, &q).unwrap() >= -1);
            assert!(valuation(&c, f, &Place::Infinity).unwrap() >= 0);
            for other in [p.conjugate(&c).unwrap(), q.conjugate(&c).unwrap()] {
                if other != p && other != q {
                    assert!(valuation(&c, f, &other).unwrap() >= 0);
                }
            }
        }
    }

    #[test]
    fn extension_keeps_prefix() {
        let c = c3();
        let p = random_place(&c, 4, 7).unwrap();
        let d = Divisor::from_place(p, 1);
        let l1 = riemann_roch_basis(&c, &d, None).unwrap();
        let l2 = riemann_roch_basis(&c, &d.scale(2), Some(&l1)).unwrap();
        assert_eq!(l2.len(), 8);
        assert_eq!(&l2[..4], &l1[..]);
        assert!(riemann_roch_basis(&c, &d, Some(&[FunctionElement::x()])).is_err());
    }

    #[test]
    fn speciality() {
        let c = c3();
        assert_eq!(speciality_index(&c, &Divisor::zero()).unwrap(), 1);
        let p = random_place(&c, 2, 1).unwrap();
        assert_eq!(speciality_index(&c, &Divisor::from_place(p, 1)).unwrap(), 0);
    }
}
