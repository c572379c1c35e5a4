use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::gf::{Fq, Poly};
use crate::linalg::Matrix;

/// Which bilinear map an inner algorithm computes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum InnerKind {
    /// (A_0..A_{u-1})·(B_0..B_{u-1}) mod t^u.
    Truncated(usize),
    /// Full product of two degree < d polynomials, 2d − 1 outputs.
    Convolution(usize),
    /// Product in F_q[X]/(p) with deg p = d.
    FieldMult(usize),
    /// Truncated product of length u over the field F_q[X]/(p) of degree d.
    Jet { d: usize, u: usize },
}

/// A symmetric bilinear algorithm: products m_j = (λ_j·a)(λ_j·b) and an
/// output c = R·m.
#[derive(Clone, Debug, Serialize)]
pub struct InnerAlgorithm {
    pub kind: InnerKind,
    /// Input length k.
    pub k: usize,
    /// One row λ_j of length k per product.
    pub forms: Vec<Vec<u8>>,
    /// Output length × number of products.
    pub recon: Matrix,
}

fn subsets(k: usize, sets: &[&[usize]]) -> Vec<Vec<u8>> {
    sets.iter()
        .map(|s| {
            let mut v = vec![0; k];
            for &i in *s {
                v[i] = 1;
            }
            v
        })
        .collect()
}

/// Karatsuba-type evaluation forms for the full product, μ(d) of them.
fn convolution_forms(d: usize) -> Result<Vec<Vec<u8>>> {
    Ok(match d {
        1 => subsets(1, &[&[0]]),
        2 => subsets(2, &[&[0], &[1], &[0, 1]]),
        3 => subsets(3, &[&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2]]),
        4 => subsets(4, &[&[0], &[1], &[2], &[3], &[0, 1], &[0, 2], &[2, 3], &[1, 3], &[0, 1, 2, 3]]),
        _ => return domain(format!("no explicit product formula for degree {d} (supported: 1..=4)")),
    })
}

/// Forms for the product truncated at t^u, M̂(u) of them.
fn truncated_forms(u: usize) -> Result<Vec<Vec<u8>>> {
    Ok(match u {
        1 => subsets(1, &[&[0]]),
        2 => subsets(2, &[&[0], &[1], &[0, 1]]),
        3 => subsets(3, &[&[0], &[1], &[2], &[0, 1], &[0, 2]]),
        _ => return domain(format!("no explicit truncated product for length {u} (supported: 1..=3)")),
    })
}

/// Solves for R with Σ_j R[s][j]·λ_j[i]·λ_j[l] = [i + l = s] for s < outputs.
fn solve_reconstruction(fq: &Fq, forms: &[Vec<u8>], k: usize, outputs: usize) -> Result<Matrix> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |l| (i, l))).collect();
    let rows: Vec<Vec<u8>> = pairs.iter().map(|&(i, l)| forms.iter().map(|f| fq.mul(f[i], f[l])).collect()).collect();
    let system = Matrix::from_rows(&rows)?;
    let mut recon = Matrix::zeros(outputs, forms.len());
    for s in 0..outputs {
        let rhs: Vec<u8> = pairs.iter().map(|&(i, l)| u8::from(i + l == s)).collect();
        let sol = system.solve_any(fq, &rhs)?.ok_or_else(|| {
            Error::Construction(format!("product forms cannot reconstruct coefficient {s} over F_{}", fq.q()))
        })?;
        for (j, c) in sol.into_iter().enumerate() {
            recon.set(s, j, c);
        }
    }
    Ok(recon)
}

/// (2d − 1) → d matrix of reduction modulo p.
fn reduction(fq: &Fq, p: &Poly) -> Result<Matrix> {
    let d = p.degree().unwrap_or(0);
    let cols: Vec<Vec<u8>> = (0..2 * d - 1)
        .map(|s| {
            let r = Poly::monomial(1, s).rem(fq, p)?;
            Ok((0..d).map(|i| r.coeff(i)).collect())
        })
        .collect::<Result<_>>()?;
    Matrix::from_cols(&cols)
}

impl InnerAlgorithm {
    pub fn truncated(fq: &Fq, u: usize) -> Result<InnerAlgorithm> {
        let forms = truncated_forms(u)?;
        let recon = solve_reconstruction(fq, &forms, u, u)?;
        Ok(InnerAlgorithm { kind: InnerKind::Truncated(u), k: u, forms, recon })
    }

    pub fn convolution(fq: &Fq, d: usize) -> Result<InnerAlgorithm> {
        let forms = convolution_forms(d)?;
        let recon = solve_reconstruction(fq, &forms, d, 2 * d - 1)?;
        Ok(InnerAlgorithm { kind: InnerKind::Convolution(d), k: d, forms, recon })
    }

    /// Multiplication in F_q[X]/(p), coordinates in the power basis.
    pub fn field_mult(fq: &Fq, p: &Poly) -> Result<InnerAlgorithm> {
        let d = p.degree().filter(|&d| d > 0).ok_or_else(|| Error::Domain("modulus must have positive degree".into()))?;
        let conv = InnerAlgorithm::convolution(fq, d)?;
        let recon = reduction(fq, p)?.mul(fq, &conv.recon)?;
        Ok(InnerAlgorithm { kind: InnerKind::FieldMult(d), k: d, forms: conv.forms, recon })
    }

    /// Truncated length-u product over F_q[X]/(p), flattened to F_q.
    ///
    /// Input and output coordinate l·d + c is the X^c coefficient of the t^l
    /// term. Products are indexed t·r_f + s for truncated form t and field form s.
    pub fn jet(fq: &Fq, p: &Poly, u: usize) -> Result<InnerAlgorithm> {
        let f = InnerAlgorithm::field_mult(fq, p)?;
        let t = InnerAlgorithm::truncated(fq, u)?;
        let d = f.k;
        if u == 1 {
            return Ok(InnerAlgorithm { kind: InnerKind::Jet { d, u }, ..f });
        }
        let (rt, rf) = (t.forms.len(), f.forms.len());
        let mut forms = Vec::with_capacity(rt * rf);
        for lt in &t.forms {
            for mu in &f.forms {
                let mut v = vec![0; u * d];
                for l in 0..u {
                    for c in 0..d {
                        v[l * d + c] = fq.mul(lt[l], mu[c]);
                    }
                }
                forms.push(v);
            }
        }
        let mut recon = Matrix::zeros(u * d, rt * rf);
        for l in 0..u {
            for c in 0..d {
                for tt in 0..rt {
                    for s in 0..rf {
                        recon.set(l * d + c, tt * rf + s, fq.mul(t.recon.get(l, tt), f.recon.get(c, s)));
                    }
                }
            }
        }
        Ok(InnerAlgorithm { kind: InnerKind::Jet { d, u }, k: u * d, forms, recon })
    }

    pub fn products(&self) -> usize {
        self.forms.len()
    }

    pub fn outputs(&self) -> usize {
        self.recon.rows()
    }

    pub fn apply(&self, fq: &Fq, a: &[u8], b: &[u8]) -> Result<Vec<u8>> {
        if a.len() != self.k || b.len() != self.k {
            return domain(format!("inner algorithm takes {} coordinates", self.k));
        }
        let m: Vec<u8> = self
            .forms
            .iter()
            .map(|f| fq.mul(crate::linalg::dot(fq, f, a), crate::linalg::dot(fq, f, b)))
            .collect();
        self.recon.mul_vec(fq, &m)
    }
}

/// The inner algorithm of the given kind with the field's standard modulus.
pub fn inner_algorithm(fq: &Fq, kind: InnerKind) -> Result<InnerAlgorithm> {
    match kind {
        InnerKind::Truncated(u) => InnerAlgorithm::truncated(fq, u),
        InnerKind::Convolution(d) => InnerAlgorithm::convolution(fq, d),
        InnerKind::FieldMult(d) => InnerAlgorithm::field_mult(fq, crate::gf::ExtField::standard(fq, d)?.modulus()),
        InnerKind::Jet { d, u } => InnerAlgorithm::jet(fq, crate::gf::ExtField::standard(fq, d)?.modulus(), u),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::ExtField;

    fn naive(fq: &Fq, a: &[u8], b: &[u8], len: usize) -> Vec<u8> {
        let mut c = vec![0; len];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                if i + j < len {
                    c[i + j] = fq.add(c[i + j], fq.mul(x, y));
                }
            }
        }
        c
    }

    fn all_vectors(q: usize, k: usize) -> Vec<Vec<u8>> {
        (0..q.pow(k as u32)).map(|mut i| (0..k).map(|_| { let c = (i % q) as u8; i /= q; c }).collect()).collect()
    }

    #[test]
    fn truncated_three_matches_printed_reconstruction() {
        let fq = Fq::prime(3).unwrap();
        let t = InnerAlgorithm::truncated(&fq, 3).unwrap();
        let m = fq.neg(1);
        let printed = [vec![1, 0, 0, 0, 0], vec![m, m, 0, 1, 0], vec![m, 1, m, 0, 1]];
        assert_eq!(t.recon.to_rows(), printed);
    }

    #[test]
    fn exhaustive_small_fields() {
        for q in [2, 3] {
            let fq = Fq::prime(q).unwrap();
            for k in 1..=3 {
                let vs = all_vectors(q as usize, k);
                let t = InnerAlgorithm::truncated(&fq, k).unwrap();
                let c = InnerAlgorithm::convolution(&fq, k).unwrap();
                for a in &vs {
                    for b in &vs {
                        assert_eq!(t.apply(&fq, a, b).unwrap(), naive(&fq, a, b, k));
                        assert_eq!(c.apply(&fq, a, b).unwrap(), naive(&fq, a, b, 2 * k - 1));
                    }
                }
            }
        }
    }

    #[test]
    fn counts() {
        let fq = Fq::prime(3).unwrap();
        let r: Vec<usize> = (1..=4).map(|d| InnerAlgorithm::convolution(&fq, d).unwrap().products()).collect();
        assert_eq!(r, [1, 3, 6, 9]);
        let r: Vec<usize> = (1..=3).map(|u| InnerAlgorithm::truncated(&fq, u).unwrap().products()).collect();
        assert_eq!(r, [1, 3, 5]);
        assert!(InnerAlgorithm::convolution(&fq, 5).is_err());
        assert!(InnerAlgorithm::truncated(&fq, 4).is_err());
    }

    #[test]
    fn field_and_jet_match_extension_arithmetic() {
        for q in [2, 3, 4, 5] {
            let fq = Fq::standard(q).unwrap();
            for d in 1..=4 {
                let f = ExtField::standard(&fq, d).unwrap();
                for u in 1..=2 {
                    let alg = InnerAlgorithm::jet(&fq, f.modulus(), u).unwrap();
                    assert_eq!(alg.products(), [1, 3, 6, 9][d - 1] * [1, 3][u - 1]);
                    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64((q * 16 + d as u64) * 4 + u as u64);
                    for _ in 0..50 {
                        let a: Vec<_> = (0..u).map(|_| f.random_elem(&mut rng)).collect();
                        let b: Vec<_> = (0..u).map(|_| f.random_elem(&mut rng)).collect();
                        let flat = |v: &[crate::gf::ExtElem]| v.iter().flat_map(|e| e.coeffs().to_vec()).collect::<Vec<u8>>();
                        let mut c = vec![f.zero(); u];
                        for i in 0..u {
                            for j in 0..u - i {
                                c[i + j] = f.add(&c[i + j], &f.mul(&a[i], &b[j]));
                            }
                        }
                        assert_eq!(alg.apply(&fq, &flat(&a), &flat(&b)).unwrap(), flat(&c), "q={q} d={d} u={u}");
                    }
                }
            }
        }
    }

    #[test]
    fn unit_times_generator() {
        let fq = Fq::prime(3).unwrap();
        let alg = inner_algorithm(&fq, InnerKind::FieldMult(2)).unwrap();
        assert_eq!(alg.apply(&fq, &[1, 0], &[0, 1]).unwrap(), vec![0, 1]);
    }
}
