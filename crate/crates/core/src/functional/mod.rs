//! Convex analysis of functionals with values in `ℝ ∪ {+∞}`: a grid backend
//! on the real line and an exact quadratic backend on `ℝⁿ`.

mod conjugate;
mod extended;
mod grid;
mod pencil;
mod quadratic;

pub use conjugate::{
    biconjugate, check_biconjugate, check_conjugate_equivalence, conjugate_at, conjugate_bruteforce, conjugate_fast, convexity_defect, default_dual_spec,
    fenchel_young_check, is_convex, subdifferential, Hull, SubdifferentialInterval, HULL_TOL,
};
pub(crate) use conjugate::{require_convex, sampled_sup, subdifferential_with};
pub use extended::{ExtendedReal, Finite, Infinity};
pub use grid::{sup_deviation, GridFunctional, GridSpec};
pub use pencil::HarmonicPencil;
pub use quadratic::{quadratic_conjugate, sample_quadratic, QuadraticFunctional};
