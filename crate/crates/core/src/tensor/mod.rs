//! Symmetric bilinear multiplication algorithms for F_{q^n}: storage,
//! evaluation, exhaustive verification and straight-line programs.

mod decomposition;
mod slp;

pub use decomposition::{Product, Provenance, TensorDecomposition, VerifyReport, Witness};
pub use slp::{emit_slp, Instr, OpCounts, Operand, SlpProgram};
