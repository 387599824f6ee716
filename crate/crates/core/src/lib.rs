//! Exact computations with higher preprojective algebras over prime fields.

pub mod error;
pub mod field;
pub mod linalg;
pub mod quiver;
pub mod groebner;
pub mod algebra;
pub mod module;
pub mod resolution;
pub mod decompose;
pub mod bimodule;
pub mod complex;
pub mod preprojective;
pub mod derived;
pub mod certify;
pub mod construction;
pub mod io;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use field::Fp;
pub use linalg::Matrix;
pub use algebra::FDAlgebra;
