//! Cyclic Jacobi eigensolver for real symmetric matrices.
//!
//! Each sweep visits every off-diagonal pair once and annihilates it with a
//! plane rotation. A pair is skipped when it is negligible relative to the
//! geometric mean of its diagonal entries, which yields eigenvalues with high
//! relative accuracy. The solver stops after the first sweep that performs no
//! rotation.

use serde::{Deserialize, Serialize};

use super::{Matrix, SymMatrix};
use crate::error::{Error, Result};

/// Maximum number of full sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `M = Q diag(λ) Qᵀ` with eigenvalues ascending and
/// eigenvectors stored as the columns of `Q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    /// `Q diag(values) Qᵀ`, symmetrized.
    pub fn synthesize(&self, values: &[f64]) -> Matrix {
        let n = self.dim();
        let q = &self.eigenvectors;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for (k, &v) in values.iter().enumerate() {
                    s += q[(i, k)] * v * q[(j, k)];
                }
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        out
    }

    /// Spectral calculus `φ(M) = Q φ(Λ) Qᵀ`. Fails if `φ` is not finite on
    /// some eigenvalue.
    pub fn map(&self, phi: impl Fn(f64) -> f64) -> Result<SymMatrix> {
        let values = self
            .eigenvalues
            .iter()
            .map(|&l| {
                let v = phi(l);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Domain(format!(
                        "matrix function is not finite at eigenvalue {l:e}"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SymMatrix::from_symmetric_unchecked(self.synthesize(&values)))
    }

    /// `‖Q Λ Qᵀ − M‖_F`.
    pub fn reconstruction_error(&self, m: &Matrix) -> f64 {
        self.synthesize(&self.eigenvalues).sub(m).frobenius_norm()
    }

    /// `‖Qᵀ Q − I‖_F`.
    pub fn orthogonality_error(&self) -> f64 {
        let q = &self.eigenvectors;
        q.transpose()
            .matmul(q)
            .sub(&Matrix::identity(self.dim()))
            .frobenius_norm()
    }
}

/// Symmetric eigen-decomposition by cyclic Jacobi rotations.
pub fn sym_eig(m: &SymMatrix) -> Result<SpectralDecomposition> {
    jacobi(m.matrix())
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

pub(crate) fn jacobi(input: &Matrix) -> Result<SpectralDecomposition> {
    let n = input.dim();
    let mut a = input.clone();
    let mut v = Matrix::identity(n);

    let mut converged = n <= 1;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                if apq.abs() <= f64::EPSILON * (app * aqq).abs().sqrt()
                    || apq.abs() < f64::MIN_POSITIVE
                {
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps,
            residual: off_diagonal_norm(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let eigenvalues = order.iter().map(|&i| a[(i, i)]).collect();
    let eigenvectors = Matrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(rows: &[&[f64]]) -> SymMatrix {
        SymMatrix::new(Matrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let d = sym_eig(&SymMatrix::identity(3)).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, 1.0, 1.0]);
        assert!(d.orthogonality_error() < 1e-15);
    }

    #[test]
    fn diagonal_is_already_diagonalized() {
        let d = sym_eig(&sym(&[&[1.0, 0.0], &[0.0, 4.0]])).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, 4.0]);
        assert_eq!(d.eigenvectors, Matrix::identity(2));
    }

    #[test]
    fn two_by_two_characteristic_polynomial() {
        // λ² − 4λ + 3 = 0 → λ ∈ {1, 3}; eigenvectors (1,−1)/√2 and (1,1)/√2.
        let d = sym_eig(&sym(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((d.eigenvalues[1] - 3.0).abs() < 1e-15);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let q = &d.eigenvectors;
        // columns are determined up to sign
        assert!((q[(0, 0)] * q[(1, 0)] + r * r).abs() < 1e-15);
        assert!((q[(0, 1)] * q[(1, 1)] - r * r).abs() < 1e-15);
    }

    #[test]
    fn map_rejects_non_finite_values() {
        let d = sym_eig(&sym(&[&[-1.0, 0.0], &[0.0, 2.0]])).unwrap();
        assert!(matches!(d.map(f64::ln), Err(Error::Domain(_))));
    }

    #[test]
    fn repeated_eigenvalues_converge() {
        let m = sym(&[&[2.0, 0.0, 0.0], &[0.0, 2.0, 1e-9], &[0.0, 1e-9, 2.0]]);
        let d = sym_eig(&m).unwrap();
        assert!(d.reconstruction_error(m.matrix()) < 1e-14);
    }
}
