use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::gf::{ExtElem, ExtField, Fq, Poly};
use crate::linalg::{dot, Matrix};

/// One rank-one term φ(α)·ψ(β)·w. A missing ψ means ψ = φ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Product {
    pub phi: Vec<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<u8>>,
    pub w: Vec<u8>,
}

impl Product {
    pub fn right(&self) -> &[u8] {
        self.psi.as_deref().unwrap_or(&self.phi)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub curve: String,
    pub shape: serde_json::Value,
    pub seed: u64,
}

/// αβ = Σ_j φ_j(Tα)·ψ_j(Tβ)·w_j in F_q[X]/(h), where T is `basis_change`
/// taking power-basis coordinates to the algorithm basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorDecomposition {
    pub q: u64,
    pub n: usize,
    /// Coefficients of h, constant term first.
    pub modulus: Vec<u8>,
    /// Defining polynomial of F_q over its prime field when q is not prime.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_modulus: Option<Vec<u8>>,
    /// Row-major n×n.
    pub basis_change: Vec<Vec<u8>>,
    pub products: Vec<Product>,
    pub symmetric: bool,
    pub rank: usize,
    #[serde(default)]
    pub provenance: Provenance,
}

/// A basis pair on which the algorithm disagrees with the field product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub i: usize,
    pub j: usize,
    pub expected: Vec<u8>,
    pub got: Vec<u8>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub pairs_checked: usize,
    pub products_correct: bool,
    pub rank: usize,
    pub rank_consistent: bool,
    pub symmetric: bool,
    pub symmetric_consistent: bool,
    /// r ≥ 2n − 1.
    pub lower_bound_ok: bool,
    pub basis_change_invertible: bool,
    pub witness: Option<Witness>,
}

impl TensorDecomposition {
    pub fn base_field(&self) -> Result<Fq> {
        let fq = Fq::standard(self.q)?;
        match &self.base_modulus {
            Some(m) if m.as_slice() != fq.modulus() => Fq::with_modulus(fq.p(), m),
            _ => Ok(fq),
        }
    }

    /// The reference field F_q[X]/(h).
    pub fn field(&self) -> Result<ExtField> {
        let fq = self.base_field()?;
        for &c in &self.modulus {
            fq.check(c as u64)?;
        }
        let h = Poly::new(self.modulus.clone());
        if h.degree() != Some(self.n) || h.lead() != 1 {
            return domain(format!("modulus must be monic of degree {}", self.n));
        }
        if !h.is_irreducible(&fq)? {
            return domain("modulus is reducible");
        }
        ExtField::new(&fq, h)
    }

    fn basis_change_matrix(&self) -> Result<Matrix> {
        if self.basis_change.len() != self.n {
            return domain("basis_change must be n x n");
        }
        Matrix::from_rows(&self.basis_change)
    }

    fn check_shapes(&self, fq: &Fq) -> Result<()> {
        for (k, p) in self.products.iter().enumerate() {
            if p.phi.len() != self.n || p.right().len() != self.n || p.w.len() != self.n {
                return domain(format!("product {k} has vectors of the wrong length"));
            }
            for &c in p.phi.iter().chain(p.right()).chain(&p.w) {
                fq.check(c as u64)?;
            }
        }
        Ok(())
    }

    /// Forms composed with the basis change, acting on power-basis
    /// coordinates: (φ_j·T, ψ_j·T).
    pub fn power_basis_forms(&self) -> Result<Vec<(Vec<u8>, Vec<u8>)>> {
        let fq = self.base_field()?;
        let t = self.basis_change_matrix()?;
        let tt = t.transpose();
        self.products
            .iter()
            .map(|p| Ok((tt.mul_vec(&fq, &p.phi)?, tt.mul_vec(&fq, p.right())?)))
            .collect()
    }

    /// αβ computed with exactly `rank` base-field products.
    pub fn apply(&self, alpha: &ExtElem, beta: &ExtElem) -> Result<ExtElem> {
        let field = self.field()?;
        let fq = field.base().clone();
        self.check_shapes(&fq)?;
        let t = self.basis_change_matrix()?;
        let forms = TensorEval { fq: &fq, t: &t, products: &self.products };
        let c = forms.eval(alpha.coeffs(), beta.coeffs())?;
        field.elem(&c)
    }

    /// Exhaustive check on all n² pairs of power-basis monomials.
    pub fn verify(&self) -> Result<VerifyReport> {
        let field = self.field()?;
        let fq = field.base().clone();
        self.check_shapes(&fq)?;
        let t = self.basis_change_matrix()?;
        let n = self.n;
        // With unit inputs the forms reduce to columns of φ·T.
        let forms = self.power_basis_forms()?;
        let units: Vec<ExtElem> = (0..n).map(|i| field.reduce_poly(&Poly::monomial(1, i))).collect();
        let mut witness = None;
        let mut pairs = 0;
        'outer: for i in 0..n {
            for j in 0..n {
                pairs += 1;
                let mut got = vec![0u8; n];
                for ((f, g), p) in forms.iter().zip(&self.products) {
                    let m = fq.mul(f[i], g[j]);
                    if m != 0 {
                        for (acc, &w) in got.iter_mut().zip(&p.w) {
                            *acc = fq.add(*acc, fq.mul(m, w));
                        }
                    }
                }
                let expected = field.mul(&units[i], &units[j]).coeffs().to_vec();
                if got != expected {
                    witness = Some(Witness { i, j, expected, got });
                    break 'outer;
                }
            }
        }
        let symmetric = self.products.iter().all(|p| p.psi.as_ref().is_none_or(|s| *s == p.phi));
        let rank = self.products.len();
        let report = VerifyReport {
            pass: false,
            pairs_checked: pairs,
            products_correct: witness.is_none(),
            rank,
            rank_consistent: rank == self.rank,
            symmetric,
            symmetric_consistent: symmetric == self.symmetric,
            lower_bound_ok: rank + 1 >= 2 * n,
            basis_change_invertible: t.inverse(&fq).is_ok(),
            witness,
        };
        Ok(VerifyReport {
            pass: report.products_correct
                && report.rank_consistent
                && report.symmetric_consistent
                && report.lower_bound_ok
                && report.basis_change_invertible,
            ..report
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<TensorDecomposition> {
        let t: TensorDecomposition = serde_json::from_str(s)?;
        if t.n == 0 {
            return Err(Error::Domain("bundle has n = 0".into()));
        }
        Ok(t)
    }
}

struct TensorEval<'a> {
    fq: &'a Fq,
    t: &'a Matrix,
    products: &'a [Product],
}

impl TensorEval<'_> {
    fn eval(&self, a: &[u8], b: &[u8]) -> Result<Vec<u8>> {
        let fq = self.fq;
        let (ta, tb) = (self.t.mul_vec(fq, a)?, self.t.mul_vec(fq, b)?);
        let mut c = vec![0u8; a.len()];
        for p in self.products {
            let m = fq.mul(dot(fq, &p.phi, &ta), dot(fq, p.right(), &tb));
            if m != 0 {
                for (acc, &w) in c.iter_mut().zip(&p.w) {
                    *acc = fq.add(*acc, fq.mul(m, w));
                }
            }
        }
        Ok(c)
    }
}
