use std::collections::BTreeMap;
use std::ops::Range;

use log::{debug, info};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::cost::CostTable;
use super::inner::InnerAlgorithm;
use super::optimize::{default_dmax, optimize_bound_with, BoundReport, DivisorShape, SearchLimits};
use crate::elliptic::{sigma, sigma_place, Curve, Point};
use crate::error::{domain, Error, Result};
use crate::function_field::{
    enumerate_places, evaluate, local_expansions, random_place, random_place_in, riemann_roch_basis, Divisor,
    FunctionElement, Place,
};
use crate::gf::ExtField;
use crate::linalg::Matrix;
use crate::tensor::{Product, Provenance, TensorDecomposition};

/// Reseeding budget for [`build`].
pub const BUILD_ATTEMPTS: usize = 16;

/// Largest place degree and jet lengths with explicit inner algorithms.
pub const BUILD_MAX_DEGREE: usize = 4;
pub const BUILD_MAX_U1: u64 = 3;
pub const BUILD_MAX_U2: u64 = 2;

/// An interpolation place of G with its multiplicity and inner algorithm.
#[derive(Clone, Debug)]
pub struct GPlace {
    pub place: Place,
    pub mult: usize,
    pub inner: InnerAlgorithm,
    /// Rows of the evaluation matrix holding this place's jet coordinates.
    pub rows: Range<usize>,
}

/// How the zero-dimensionality of L(2D − G) was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    /// deg(2D − G) < 0.
    Degree,
    /// deg(2D − G) = 0 and σ(2D − G) ≠ O.
    Sigma,
}

/// Each hypothesis of the construction, checked independently.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub eval_rank: usize,
    /// L(2D) → jets at G is injective.
    pub injective: bool,
    pub q_rank: usize,
    /// L(D) → F_{q^n} at Q is onto.
    pub surjective: bool,
    pub disjoint: bool,
    pub deg_2d_minus_g: i64,
    pub zero_dimensional: bool,
    pub zero_dimensional_by: Criterion,
    /// σ(D) ≠ σ(Q), i.e. i(D − Q) = 0.
    pub non_special: bool,
    /// The rank verdicts agree with the divisor-theoretic ones.
    pub consistent: bool,
}

impl ConditionReport {
    pub fn ok(&self) -> bool {
        self.injective && self.surjective && self.disjoint
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.injective {
            v.push("evaluation map on L(2D) is not injective");
        }
        if !self.surjective {
            v.push("evaluation of L(D) at Q is not onto");
        }
        if !self.disjoint {
            v.push("supp D meets Q or G");
        }
        if !self.consistent {
            v.push("rank checks disagree with the divisor criteria");
        }
        v
    }
}

/// Everything needed to write down the multiplication algorithm.
#[derive(Clone, Debug)]
pub struct BuildPlan {
    pub curve: Curve,
    pub n: usize,
    pub seed: u64,
    pub attempt: usize,
    pub shape: DivisorShape,
    /// The reference field F_{q^n}, residue field of Q.
    pub field: ExtField,
    pub q_place: Place,
    pub d: Divisor,
    pub g: Vec<GPlace>,
    /// f_1..f_2n; the first n span L(D).
    pub basis: Vec<FunctionElement>,
    /// deg G × 2n jet coordinates.
    pub eval: Matrix,
    /// 2n × deg G with eval_inv·eval = I.
    pub eval_inv: Matrix,
    /// n × 2n power-basis coordinates of e_k = f_k(Q).
    pub q_eval: Matrix,
    /// n × n: column k holds e_{n+k} in the basis e_1..e_n.
    pub reduction: Matrix,
    pub conditions: ConditionReport,
}

impl BuildPlan {
    pub fn deg_g(&self) -> usize {
        self.eval.rows()
    }

    pub fn g_divisor(&self) -> Divisor {
        self.g.iter().map(|gp| (gp.place.clone(), gp.mult as i64)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let g: Vec<_> = self.g.iter().map(|gp| json!({"place": gp.place.to_json(), "mult": gp.mult})).collect();
        json!({
            "curve": self.curve.to_json(),
            "equation": self.curve.equation(),
            "n": self.n,
            "seed": self.seed,
            "attempt": self.attempt,
            "shape": self.shape,
            "modulus": self.field.modulus().coeffs(),
            "Q": self.q_place.to_json(),
            "D": self.d.to_json(),
            "G": g,
            "basis": self.basis,
            "eval": self.eval.to_rows(),
            "eval_inv": self.eval_inv.to_rows(),
            "q_eval": self.q_eval.to_rows(),
            "reduction": self.reduction.to_rows(),
            "conditions": self.conditions,
        })
    }
}

/// Search limits matching the explicit inner algorithms. Degree n is kept
/// out of G so that Q and D never compete with it.
pub fn build_limits(q: u64, n: usize, dmax: Option<usize>) -> SearchLimits {
    let d = dmax.unwrap_or_else(|| default_dmax(q, n as u64)).min(BUILD_MAX_DEGREE).min(n.saturating_sub(1)).max(1);
    SearchLimits::with_caps(d, BUILD_MAX_U1, BUILD_MAX_U2)
}

/// Cheapest shape on `curve` that [`build`] can realize.
pub fn buildable_shape(curve: &Curve, n: usize, dmax: Option<usize>) -> Result<BoundReport> {
    optimize_bound_with(n as u64, curve, &build_limits(curve.q() as u64, n, dmax), false)
}

fn inner_for(curve: &Curve, p: &Place, u: usize) -> Result<InnerAlgorithm> {
    InnerAlgorithm::jet(curve.fq(), p.residue_field(curve).modulus(), u)
}

/// Seed chain: K and Q from the first two draws, then (D, G) per attempt.
struct Seeds {
    rng: ChaCha8Rng,
}

impl Seeds {
    fn next(&mut self) -> u64 {
        self.rng.gen()
    }
}

/// Samples Q, D and G for the shape and assembles every matrix, reseeding D
/// and G on failure.
pub fn build(curve: &Curve, n: usize, shape: &DivisorShape, seed: u64) -> Result<BuildPlan> {
    build_with(curve, n, shape, seed, BUILD_ATTEMPTS)
}

pub fn build_with(curve: &Curve, n: usize, shape: &DivisorShape, seed: u64, attempts: usize) -> Result<BuildPlan> {
    let fq = curve.fq();
    if n < 2 {
        return domain("n must be at least 2");
    }
    let deg_g = shape.degree();
    if deg_g < 2 * n as u64 {
        return domain(format!("deg G = {deg_g} is below 2n = {}", 2 * n));
    }
    if shape.dmax() >= n && shape.terms().any(|(d, _, _)| d >= n) {
        return domain(format!("G may not use places of degree >= n = {n}"));
    }
    let mut seeds = Seeds { rng: ChaCha8Rng::seed_from_u64(seed) };
    let (seed_k, seed_q) = (seeds.next(), seeds.next());
    let field = ExtField::random(fq, n, seed_k)?;
    let q_place = random_place_in(curve, &field, seed_q)?;
    info!("seed {seed}: reference field seed {seed_k}, Q seed {seed_q}, modulus {}", field.modulus().display(fq, "X"));
    let sigma_q = sigma_place(curve, &q_place)?;

    let mut candidates: BTreeMap<usize, Vec<Place>> = BTreeMap::new();
    for (d, k, u) in shape.terms() {
        let all = enumerate_places(curve, d)?;
        if (all.len() as u64) < k {
            return domain(format!("shape asks for {k} places of degree {d}, the curve has {}", all.len()));
        }
        inner_for(curve, &all[0], u as usize)?;
        candidates.insert(d, all);
    }

    let mut last: Vec<String> = Vec::new();
    for attempt in 0..attempts {
        let (seed_d, seed_g) = (seeds.next(), seeds.next());
        debug!("attempt {attempt}: D seed {seed_d}, G seed {seed_g}");
        let d_place = random_place(curve, n, seed_d)?;
        if d_place == q_place {
            last = vec!["D coincides with Q".into()];
            continue;
        }
        let d = Divisor::from_place(d_place, 1);

        let mut g_places: Vec<(Place, usize)> = Vec::new();
        for (deg, k, u) in shape.terms() {
            let mut pool: Vec<Place> =
                candidates[&deg].iter().filter(|p| **p != q_place && d.mult(p) == 0).cloned().collect();
            if (pool.len() as u64) < k {
                return Err(Error::Construction(format!("not enough places of degree {deg} outside D and Q")));
            }
            if (pool.len() as u64) > k {
                pool.shuffle(&mut ChaCha8Rng::seed_from_u64(seed_g ^ deg as u64));
                pool.truncate(k as usize);
                pool.sort();
            }
            g_places.extend(pool.into_iter().map(|p| (p, u as usize)));
        }

        let plan = match assemble_plan(curve, n, shape, seed, attempt, &field, &q_place, d, &g_places, &sigma_q) {
            Ok(p) => p,
            Err(Error::Construction(m)) => {
                last = vec![m];
                continue;
            }
            Err(e) => return Err(e),
        };
        if plan.conditions.ok() {
            if !plan.conditions.consistent {
                return Err(Error::Internal(format!("condition cross-check failed: {:?}", plan.conditions)));
            }
            info!("seed {seed}: plan found on attempt {attempt}");
            return Ok(plan);
        }
        last = plan.conditions.failures().into_iter().map(String::from).collect();
        debug!("attempt {attempt} rejected: {}", last.join("; "));
    }
    Err(Error::Construction(format!("no valid plan after {attempts} attempts; last: {}", last.join("; "))))
}

#[allow(clippy::too_many_arguments)]
fn assemble_plan(
    curve: &Curve,
    n: usize,
    shape: &DivisorShape,
    seed: u64,
    attempt: usize,
    field: &ExtField,
    q_place: &Place,
    d: Divisor,
    g_places: &[(Place, usize)],
    sigma_q: &Point,
) -> Result<BuildPlan> {
    let fq = curve.fq();
    let l1 = riemann_roch_basis(curve, &d, None)?;
    let basis = riemann_roch_basis(curve, &d.scale(2), Some(&l1))?;
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut g = Vec::with_capacity(g_places.len());
    for (p, u) in g_places {
        let jets = local_expansions(curve, &basis, p, *u)?;
        let start = rows.len();
        let deg = p.degree();
        for l in 0..*u {
            for c in 0..deg {
                rows.push(jets.iter().map(|j| j.coeffs[l].coeffs()[c]).collect());
            }
        }
        g.push(GPlace { place: p.clone(), mult: *u, inner: inner_for(curve, p, *u)?, rows: start..rows.len() });
    }
    let eval = Matrix::from_rows(&rows)?;
    let mut q_cols = Vec::with_capacity(2 * n);
    for f in &basis {
        q_cols.push(evaluate(curve, f, q_place)?.coeffs().to_vec());
    }
    let q_eval = Matrix::from_cols(&q_cols)?;
    let mut plan = BuildPlan {
        curve: curve.clone(),
        n,
        seed,
        attempt,
        shape: shape.clone(),
        field: field.clone(),
        q_place: q_place.clone(),
        d,
        g,
        basis,
        eval_inv: Matrix::zeros(0, 0),
        reduction: Matrix::zeros(0, 0),
        eval,
        q_eval,
        conditions: ConditionReport {
            eval_rank: 0,
            injective: false,
            q_rank: 0,
            surjective: false,
            disjoint: false,
            deg_2d_minus_g: 0,
            zero_dimensional: false,
            zero_dimensional_by: Criterion::Degree,
            non_special: false,
            consistent: false,
        },
    };
    plan.conditions = check_conditions_with(&plan, Some(sigma_q))?;
    if plan.conditions.ok() {
        plan.eval_inv = plan.eval.left_inverse(fq)?;
        let idx: Vec<usize> = (0..n).collect();
        let hi: Vec<usize> = (n..2 * n).collect();
        let b_inv = plan.q_eval.select_cols(&idx).inverse(fq)?;
        plan.reduction = b_inv.mul(fq, &plan.q_eval.select_cols(&hi))?;
    }
    Ok(plan)
}

/// Checks every hypothesis on a populated plan: ranks of the two evaluation
/// maps, support disjointness, and the σ-based divisor criteria.
pub fn check_conditions(plan: &BuildPlan) -> Result<ConditionReport> {
    check_conditions_with(plan, None)
}

fn check_conditions_with(plan: &BuildPlan, sigma_q: Option<&Point>) -> Result<ConditionReport> {
    let curve = &plan.curve;
    let fq = curve.fq();
    let n = plan.n;
    let eval_rank = plan.eval.rank(fq);
    let q_rank = plan.q_eval.select_cols(&(0..n).collect::<Vec<_>>()).rank(fq);
    let g = plan.g_divisor();
    let disjoint = plan.d.disjoint(&g) && plan.d.mult(&plan.q_place) == 0 && g.mult(&plan.q_place) == 0;
    let two_d = plan.d.scale(2);
    let deg_2d_minus_g = two_d.degree() - g.degree();
    let (zero_dimensional, zero_dimensional_by) = if deg_2d_minus_g < 0 {
        (true, Criterion::Degree)
    } else if deg_2d_minus_g == 0 {
        (sigma(curve, &two_d.sub(&g))? != Point::Infinity, Criterion::Sigma)
    } else {
        (false, Criterion::Degree)
    };
    let sq = match sigma_q {
        Some(s) => s.clone(),
        None => sigma_place(curve, &plan.q_place)?,
    };
    let non_special = sigma(curve, &plan.d)? != sq;
    let injective = eval_rank == 2 * n;
    let surjective = q_rank == n;
    Ok(ConditionReport {
        eval_rank,
        injective,
        q_rank,
        surjective,
        disjoint,
        deg_2d_minus_g,
        zero_dimensional,
        zero_dimensional_by,
        non_special,
        consistent: injective == zero_dimensional && surjective == non_special,
    })
}

/// The symmetric tensor of a plan, one product per inner bilinear product.
pub fn assemble_tensor(plan: &BuildPlan) -> Result<TensorDecomposition> {
    let curve = &plan.curve;
    let fq = curve.fq();
    let n = plan.n;
    if !plan.conditions.ok() {
        return Err(Error::Construction(format!("plan fails: {}", plan.conditions.failures().join("; "))));
    }
    let idx: Vec<usize> = (0..n).collect();
    let basis_change = plan.q_eval.select_cols(&idx).inverse(fq)?;
    let w_all = plan.q_eval.mul(fq, &plan.eval_inv)?;
    let mut products = Vec::new();
    for gp in &plan.g {
        let alg = &gp.inner;
        let block: Vec<&[u8]> = gp.rows.clone().map(|r| &plan.eval.row(r)[..n]).collect();
        for (j, lam) in alg.forms.iter().enumerate() {
            let mut phi = vec![0u8; n];
            for (r, &c) in lam.iter().enumerate() {
                if c != 0 {
                    for (acc, &e) in phi.iter_mut().zip(block[r]) {
                        *acc = fq.add(*acc, fq.mul(c, e));
                    }
                }
            }
            let mut w = vec![0u8; n];
            for (r, row) in gp.rows.clone().enumerate() {
                let c = alg.recon.get(r, j);
                if c != 0 {
                    for (i, acc) in w.iter_mut().enumerate() {
                        *acc = fq.add(*acc, fq.mul(c, w_all.get(i, row)));
                    }
                }
            }
            products.push(Product { phi, psi: None, w });
        }
    }
    let declared = plan.shape.cost(&CostTable::new(curve.q() as u64))?;
    if products.len() as u64 != declared {
        return Err(Error::Internal(format!("{} products for a shape of cost {declared}", products.len())));
    }
    let shape = plan.shape.trimmed();
    Ok(TensorDecomposition {
        q: curve.q() as u64,
        n,
        modulus: plan.field.modulus().coeffs().to_vec(),
        base_modulus: (!fq.is_prime_field()).then(|| fq.modulus().to_vec()),
        basis_change: basis_change.to_rows(),
        rank: products.len(),
        products,
        symmetric: true,
        provenance: Provenance { curve: curve.equation(), shape: json!({"N": shape.n, "U": shape.u}), seed: plan.seed },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Fq;

    #[test]
    fn small_ternary_build_verifies() {
        let c = Curve::parse(&Fq::prime(3).unwrap(), "y^2 = x^3 + x^2 + 2").unwrap();
        let r = buildable_shape(&c, 5, None).unwrap();
        let plan = build(&c, 5, &r.shape, 1).unwrap();
        assert!(plan.conditions.ok() && plan.conditions.consistent);
        let t = assemble_tensor(&plan).unwrap();
        assert_eq!(t.rank as u64, r.bound);
        let v = t.verify().unwrap();
        assert!(v.pass, "{v:?}");
    }

    #[test]
    fn binary_build_with_jets() {
        let c = Curve::parse(&Fq::prime(2).unwrap(), "y^2 + y + x^3 = 0").unwrap();
        let r = buildable_shape(&c, 7, None).unwrap();
        let plan = build(&c, 7, &r.shape, 3).unwrap();
        let t = assemble_tensor(&plan).unwrap();
        assert!(t.verify().unwrap().pass);
        assert!(t.rank >= 13);
    }

    #[test]
    fn deterministic() {
        let c = Curve::parse(&Fq::prime(3).unwrap(), "y^2 = x^3 + x^2 + 2").unwrap();
        let r = buildable_shape(&c, 4, None).unwrap();
        let a = build(&c, 4, &r.shape, 9).unwrap();
        let b = build(&c, 4, &r.shape, 9).unwrap();
        assert_eq!(a.to_json().to_string(), b.to_json().to_string());
    }

    #[test]
    fn shape_below_2n_rejected() {
        let c = Curve::parse(&Fq::prime(3).unwrap(), "y^2 = x^3 + x^2 + 2").unwrap();
        let s = DivisorShape::new(vec![3], vec![1]).unwrap();
        assert!(matches!(build(&c, 5, &s, 0), Err(Error::Domain(_))));
    }
}
