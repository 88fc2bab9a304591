//! Weighted operator means and relative operator entropies of positive
//! definite matrices, and their extensions to convex functionals through
//! Fenchel conjugation, with two backends: exact quadratic functionals and
//! extended-real functionals sampled on a uniform 1-D grid.
//!
//! Everything is real: matrices are real symmetric and functionals live on `ℝ`.

pub mod error;
pub mod functional;
pub mod functional_entropy;
pub mod functional_means;
pub mod harness;
pub mod matrix;
pub mod operator_entropy;
pub mod operator_means;
pub mod quadrature;
pub mod record;
pub mod weight;

pub use error::{Error, Result};
pub use weight::Weight;
