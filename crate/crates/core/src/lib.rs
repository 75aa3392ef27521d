//! Exact computations with differential graded Lie algebras over ℚ.

pub mod ce;
pub mod complex;
pub mod dgla;
pub mod env;
pub mod error;
pub mod graded;
pub mod matrix;
pub mod moduli;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
