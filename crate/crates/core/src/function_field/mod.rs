//! The function field of an elliptic curve: elements, places, divisors,
//! local expansions and Riemann–Roch spaces.

mod element;
mod local;
mod place;
mod riemann_roch;
mod series;

pub use element::FunctionElement;
pub use local::{evaluate, local_expansion, local_expansions, pole_order_at_infinity, valuation, JetVector};
pub use place::{
    enumerate_places, random_place, random_place_in, Divisor, DivisorTerm, FinitePlace, Place, PlaceJson,
    PLACE_ATTEMPTS,
};
pub use riemann_roch::{dimension, max_pole_at_infinity, riemann_roch_basis, speciality_index};
