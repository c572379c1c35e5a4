//! Exact arithmetic over small finite fields, their extensions, and
//! univariate polynomials.

mod ext;
mod fq;
mod poly;

pub use ext::{ExtElem, ExtField};
pub use fq::{prime_power, Fq};
pub use poly::Poly;
