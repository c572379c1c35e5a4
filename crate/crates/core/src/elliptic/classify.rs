use std::fmt;

use serde::Serialize;

use super::count::{group_structure, GroupStructure};
use super::Curve;
use crate::error::{domain, Result};
use crate::gf::Fq;

/// The four situations distinguished by the degree requirement on G.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    A,
    B,
    C,
    D,
}

impl Case {
    /// Extra degree required of G beyond 2n.
    pub fn slack(self) -> u64 {
        match self {
            Case::A => 3,
            Case::B | Case::C => 1,
            Case::D => 0,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Case::A => "a",
            Case::B => "b",
            Case::C => "c",
            Case::D => "d",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveClass {
    pub case: Case,
    pub n1: u64,
    pub slack: u64,
    /// Case b only: slack 0 is admissible when σ(G) ≠ P_∞.
    pub sigma_caveat: bool,
    pub group: GroupStructure,
}

/// Classification by rational point count and group structure.
pub fn classify(curve: &Curve) -> Result<CurveClass> {
    if curve.discriminant() == 0 {
        return domain("singular curve");
    }
    let group = group_structure(curve)?;
    let n1 = group.order;
    let odd = curve.fq().p() != 2;
    let case = match n1 {
        1 => Case::A,
        2 => Case::B,
        4 if odd && group.factors == [2, 2] => Case::C,
        _ => Case::D,
    };
    Ok(CurveClass { case, n1, slack: case.slack(), sigma_caveat: case == Case::B, group })
}

/// A named curve with the case it is listed under.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub equation: &'static str,
    pub listed: Case,
    pub curve: Curve,
}

const LISTS: &[(u64, Case, &str)] = &[
    (2, Case::A, "y^2 + y + (x^3 + x + 1) = 0"),
    (2, Case::B, "y^2 + xy + x^3 + x^2 + 1 = 0"),
    (2, Case::D, "y^2 + y + x^3 = 0"),
    (2, Case::D, "y^2 + y + x^3 + x = 0"),
    (2, Case::D, "y^2 + xy + x^3 + 1 = 0"),
    (3, Case::A, "y^2 - (x^3 + 2x + 2) = 0"),
    (3, Case::B, "y^2 - (x^3 + 2x^2 + 2) = 0"),
    (3, Case::C, "y^2 + y + 2x^3 + x + 1 = 0"),
    (3, Case::D, "y^2 + 2x^3 + 2x = 0"),
    (3, Case::D, "y^2 + 2x^3 + x + 2 = 0"),
    (3, Case::D, "y^2 + 2x^3 + 2x^2 + 2 = 0"),
    (3, Case::D, "y^2 + 2x^3 + 2x^2 + 1 = 0"),
    (3, Case::D, "y^2 + 2x^3 + x^2 + 2 = 0"),
    (4, Case::A, "y^2 + y + (x^3 + a) = 0"),
    (4, Case::B, "y^2 + xy + (x^3 + ax^2 + 1) = 0"),
    (5, Case::B, "y^2 - (x^3 + 2x) = 0"),
    (5, Case::C, "y^2 + 4x^3 + 4x = 0"),
    (7, Case::C, "y^2 + 6x^3 + 1 = 0"),
    (9, Case::C, "y^2 + (x + 1)y + 2x^3 + x^2 + ax + 1 = 0"),
];

/// Field sizes with catalog entries.
pub const CATALOG_Q: [u64; 6] = [2, 3, 4, 5, 7, 9];

/// Named curves over F_q, in listing order (cases a, b, c, then d).
pub fn catalog(q: u64) -> Result<Vec<CatalogEntry>> {
    if !CATALOG_Q.contains(&q) {
        return domain(format!("no catalog curves for q = {q} (supported: 2, 3, 4, 5, 7, 9)"));
    }
    let fq = Fq::standard(q)?;
    LISTS
        .iter()
        .filter(|(qq, _, _)| *qq == q)
        .map(|&(_, listed, equation)| Ok(CatalogEntry { equation, listed, curve: Curve::parse(&fq, equation)? }))
        .collect()
}
