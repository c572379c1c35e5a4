pub mod builder;
pub mod cli;
pub mod elliptic;
pub mod error;
pub mod function_field;
pub mod gf;
pub mod linalg;
pub mod tensor;

pub use error::{Error, Result};
