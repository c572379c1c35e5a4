//! Generalized Weierstrass curves: group law, point and place counts, the
//! curve catalog and classification, and the σ map on divisors.

mod classify;
mod count;
mod curve;
mod parse;
mod sigma;

pub use classify::{catalog, classify, Case, CatalogEntry, CurveClass, CATALOG_Q};
pub use count::{enumerate_points, group_structure, zeta_counts, zeta_from_n1, GroupStructure, ZetaData, ENUMERATION_LIMIT};
pub use curve::{Curve, CurveJson, Point};
pub use sigma::{sigma, sigma_place};
