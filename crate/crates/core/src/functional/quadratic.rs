//! Quadratic functionals `f_T(x) = ½⟨Tx, x⟩` on `ℝⁿ`, the exact backend.

use serde::{Deserialize, Serialize};

use super::grid::{GridFunctional, GridSpec};
use crate::error::{Error, Result};
use crate::matrix::{PDMatrix, SymMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFunctional {
    matrix: SymMatrix,
}

impl QuadraticFunctional {
    pub fn new(matrix: SymMatrix) -> Self {
        QuadraticFunctional { matrix }
    }

    pub fn from_pd(a: &PDMatrix) -> Self {
        QuadraticFunctional::new(a.as_sym().clone())
    }

    /// One-dimensional `f_a(x) = a x²/2`.
    pub fn scalar(a: f64) -> Self {
        QuadraticFunctional::new(SymMatrix::scalar(a))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.matrix
    }

    /// The generating matrix as a positive definite matrix, if it is one.
    pub fn pd(&self) -> Result<PDMatrix> {
        PDMatrix::new(self.matrix.clone())
    }

    /// `½⟨Tx, x⟩`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(self.matrix.half_quadratic_form(x))
    }

    /// Coefficient `a` of a one-dimensional functional `a x²/2`.
    pub fn coefficient(&self) -> Result<f64> {
        if self.dim() != 1 {
            return Err(Error::Precondition(format!(
                "expected a one-dimensional quadratic, got dimension {}",
                self.dim()
            )));
        }
        Ok(self.matrix.matrix()[(0, 0)])
    }

    pub fn check_dim(&self, other: &QuadraticFunctional) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }
}

/// `(f_A)* = f_{A⁻¹}`; the inverse is spectral.
pub fn quadratic_conjugate(q: &QuadraticFunctional) -> Result<QuadraticFunctional> {
    let a = q.pd().map_err(|_| {
        Error::Domain("conjugate of a quadratic with a non positive definite matrix is not quadratic".into())
    })?;
    Ok(QuadraticFunctional::from_pd(&a.inverse()))
}

/// Samples a one-dimensional `a x²/2` on `spec`.
pub fn sample_quadratic(q: &QuadraticFunctional, spec: GridSpec) -> Result<GridFunctional> {
    let a = q.coefficient()?;
    GridFunctional::from_fn(spec, |x| 0.5 * a * x * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::Finite;

    #[test]
    fn conjugate_examples() {
        let i = QuadraticFunctional::from_pd(&PDMatrix::identity(3));
        assert_eq!(quadratic_conjugate(&i).unwrap().matrix(), &SymMatrix::identity(3));
        let two = quadratic_conjugate(&QuadraticFunctional::scalar(2.0)).unwrap();
        assert!((two.coefficient().unwrap() - 0.5).abs() < 1e-15);
        let q = QuadraticFunctional::new(SymMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap());
        let inv = quadratic_conjugate(&q).unwrap();
        let want = SymMatrix::from_rows(&[[2.0 / 3.0, -1.0 / 3.0], [-1.0 / 3.0, 2.0 / 3.0]]).unwrap();
        assert!(inv.matrix().sub(&want).frobenius_norm() < 1e-14);
        let indefinite = QuadraticFunctional::new(SymMatrix::diagonal(&[1.0, -1.0]));
        assert!(matches!(quadratic_conjugate(&indefinite), Err(Error::Domain(_))));
    }

    #[test]
    fn evaluation_and_sampling() {
        let q = QuadraticFunctional::new(SymMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap());
        assert_eq!(q.eval(&[1.0, 1.0]).unwrap(), 3.0);
        assert!(q.eval(&[1.0]).is_err());
        let g = sample_quadratic(&QuadraticFunctional::scalar(2.0), GridSpec::new(-1.0, 1.0, 3).unwrap()).unwrap();
        assert_eq!(g.values(), &[Finite(1.0), Finite(0.0), Finite(1.0)]);
        let g = sample_quadratic(&QuadraticFunctional::scalar(1.0), GridSpec::new(0.0, 3.0, 4).unwrap()).unwrap();
        assert_eq!(g.value(3), Finite(4.5));
        assert!(sample_quadratic(&q, GridSpec::new(0.0, 1.0, 2).unwrap()).is_err());
    }
}
