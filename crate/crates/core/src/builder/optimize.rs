use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::cost::CostTable;
use crate::elliptic::{catalog, classify, zeta_counts, Case, Curve};
use crate::error::{Error, Result};

/// Per-degree place counts N_d and uniform multiplicities u_d (index d − 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorShape {
    #[serde(rename = "N")]
    pub n: Vec<u64>,
    #[serde(rename = "U")]
    pub u: Vec<u64>,
}

impl DivisorShape {
    pub fn new(n: Vec<u64>, u: Vec<u64>) -> Result<DivisorShape> {
        if n.len() != u.len() || u.contains(&0) {
            return Err(Error::Domain("N and U must have equal length and U entries must be positive".into()));
        }
        Ok(DivisorShape { n, u })
    }

    pub fn dmax(&self) -> usize {
        self.n.len()
    }

    /// deg G = Σ N_d·d·u_d.
    pub fn degree(&self) -> u64 {
        self.terms().map(|(d, k, u)| k * d as u64 * u).sum()
    }

    /// Σ N_d·μ_q(d)·M̂(u_d).
    pub fn cost(&self, table: &CostTable) -> Result<u64> {
        self.terms().try_fold(0, |acc, (d, k, u)| Ok(acc + k * table.cost(d, u as usize)?))
    }

    /// (degree, count, multiplicity) for every degree with N_d > 0.
    pub fn terms(&self) -> impl Iterator<Item = (usize, u64, u64)> + '_ {
        self.n.iter().zip(&self.u).enumerate().filter(|(_, (k, _))| **k > 0).map(|(i, (&k, &u))| (i + 1, k, u))
    }

    /// Drops trailing degrees with no places.
    pub fn trimmed(&self) -> DivisorShape {
        let len = self.n.iter().rposition(|&k| k > 0).map_or(0, |i| i + 1);
        DivisorShape { n: self.n[..len].to_vec(), u: self.u[..len].to_vec() }
    }
}

impl fmt::Display for DivisorShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N = {:?}, U = {:?}", self.n, self.u)
    }
}

/// Multiplicity caps for the search: u_1 ≤ 5, u_2 ≤ 2 and u_d = 1 beyond.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub dmax: usize,
    pub u_cap: Vec<u64>,
}

impl SearchLimits {
    pub fn new(dmax: usize) -> SearchLimits {
        SearchLimits::with_caps(dmax, 5, 2)
    }

    pub fn with_caps(dmax: usize, u1: u64, u2: u64) -> SearchLimits {
        let u_cap = (1..=dmax).map(|d| match d {
            1 => u1,
            2 => u2,
            _ => 1,
        });
        SearchLimits { dmax, u_cap: u_cap.collect() }
    }
}

/// Default largest place degree: the least d with q^d > 2n, clipped to the
/// cost table.
pub fn default_dmax(q: u64, n: u64) -> usize {
    let mut d = 1;
    while (q as u128).pow(d as u32) <= 2 * n as u128 {
        d += 1;
    }
    d.min(CostTable::new(q).max_degree())
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Partial {
    cost: u64,
    /// Places with u > 1, each of which needs derivative evaluations.
    jets: u64,
    u: Vec<u64>,
    n: Reverse<Vec<u64>>,
}

/// Cheapest shape with Σ N_d·d·u_d ≥ target and N_d ≤ b[d − 1].
///
/// Exact dynamic program over the running degree. Among equal costs the
/// fewest places with u > 1 win, then the lexicographically smallest U, then the lexicographically largest N
/// (low-degree places are used up first). The degree overshoot plays no part.
pub fn optimize_shape(table: &CostTable, b: &[u64], target: u64, limits: &SearchLimits) -> Result<(DivisorShape, u64)> {
    let dmax = limits.dmax.min(b.len());
    if dmax > table.max_degree() {
        return Err(Error::Domain(format!("dmax {dmax} exceeds the cost table ({})", table.max_degree())));
    }
    let mut best: BTreeMap<u64, Partial> = BTreeMap::new();
    best.insert(0, Partial { cost: 0, jets: 0, u: Vec::new(), n: Reverse(Vec::new()) });
    for d in 1..=dmax {
        let mut next: BTreeMap<u64, Partial> = BTreeMap::new();
        for (&tot, p) in &best {
            for u in 1..=limits.u_cap[d - 1] {
                let unit = table.cost(d, u as usize)?;
                for k in u64::from(u > 1)..=b[d - 1] {
                    let nt = tot + k * d as u64 * u;
                    let mut cand = p.clone();
                    cand.cost += k * unit;
                    if u > 1 {
                        cand.jets += k;
                    }
                    cand.n.0.push(k);
                    cand.u.push(u);
                    match next.get(&nt) {
                        Some(cur) if *cur <= cand => {}
                        _ => {
                            next.insert(nt, cand);
                        }
                    }
                    if nt >= target {
                        break;
                    }
                }
            }
        }
        best = next;
    }
    let Some(p) = best.range(target..).map(|(_, p)| p).min() else {
        let max: u64 = (1..=dmax).map(|d| b[d - 1] * d as u64 * limits.u_cap[d - 1]).sum();
        return Err(Error::Construction(format!(
            "infeasible: degree target {target} but at most {max} is reachable with places of degree <= {dmax}"
        )));
    };
    Ok((DivisorShape { n: p.n.0.clone(), u: p.u.clone() }, p.cost))
}

/// The outcome of a bound search on one curve.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub q: u64,
    pub n: u64,
    pub curve: String,
    pub case: Case,
    pub slack: u64,
    #[serde(rename = "N")]
    pub big_n: Vec<u64>,
    #[serde(rename = "U")]
    pub big_u: Vec<u64>,
    pub bound: u64,
    #[serde(rename = "degG")]
    pub deg_g: u64,
    #[serde(skip)]
    pub shape: DivisorShape,
}

impl BoundReport {
    /// "3*5 + 6*3 + 11*6 + 15*9": one N_d·μ_q(d, u_d) term per used degree.
    pub fn breakdown(&self) -> String {
        let t = CostTable::new(self.q);
        self.shape
            .terms()
            .map(|(d, k, u)| format!("{k}*{}", t.cost(d, u as usize).expect("shape within table")))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Degree slack for a case; case b uses 1 unless `strict_b` asks for 0.
pub fn slack_for(case: Case, strict_b: bool) -> u64 {
    if case == Case::B && strict_b {
        0
    } else {
        case.slack()
    }
}

/// Cheapest shape for multiplication in F_{q^n} on the given curve.
pub fn optimize_bound(n: u64, curve: &Curve, dmax: usize) -> Result<BoundReport> {
    optimize_bound_with(n, curve, &SearchLimits::new(dmax), false)
}

pub fn optimize_bound_with(n: u64, curve: &Curve, limits: &SearchLimits, strict_b: bool) -> Result<BoundReport> {
    let q = curve.q() as u64;
    let class = classify(curve)?;
    let slack = slack_for(class.case, strict_b);
    let z = zeta_counts(curve, limits.dmax)?;
    let b: Vec<u64> = z.b.iter().map(|&x| x as u64).collect();
    let table = CostTable::new(q);
    let (shape, bound) = optimize_shape(&table, &b, 2 * n + slack, limits)?;
    Ok(BoundReport {
        q,
        n,
        curve: curve.equation(),
        case: class.case,
        slack,
        big_n: shape.n.clone(),
        big_u: shape.u.clone(),
        bound,
        deg_g: shape.degree(),
        shape,
    })
}

/// The best catalog curve for (q, n); earlier catalog entries win ties.
pub fn best_curve(q: u64, n: u64, dmax: usize) -> Result<(Curve, BoundReport)> {
    let mut best: Option<(Curve, BoundReport)> = None;
    for e in catalog(q)? {
        let r = match optimize_bound(n, &e.curve, dmax) {
            Ok(r) => r,
            Err(Error::Construction(_)) => continue,
            Err(e) => return Err(e),
        };
        if best.as_ref().is_none_or(|(_, b)| r.bound < b.bound) {
            best = Some((e.curve, r));
        }
    }
    best.ok_or_else(|| Error::Construction(format!("no catalog curve over F_{q} reaches degree 2*{n}")))
}
