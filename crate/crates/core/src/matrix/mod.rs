//! Dense real symmetric linear algebra: spectral decomposition, matrix
//! functions, congruence, Loewner-order testing and random SPD generation.

mod dense;
mod eigen;
pub mod io;
mod random;

use serde::{Deserialize, Serialize};

pub use dense::Matrix;
pub use eigen::{sym_eig, SpectralDecomposition, MAX_SWEEPS};
pub use random::{random_invertible, random_orthogonal, random_spd, random_spd_with};

use crate::error::{Error, Result};

/// Asymmetry accepted by [`SymMatrix::new`] before symmetrization, relative
/// to the largest entry.
const SYMMETRY_GUARD: f64 = 1e-8;

/// Positive definiteness floor: `λ_min > POSITIVITY_FLOOR · λ_max`.
pub const POSITIVITY_FLOOR: f64 = 1e-12;

/// Real symmetric matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    /// Symmetrizes `(M + Mᵀ)/2`. Inputs that are far from symmetric are
    /// rejected rather than silently averaged.
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        if m.asymmetry() > SYMMETRY_GUARD * (1.0 + m.max_abs()) {
            return Err(Error::Domain(format!(
                "matrix is not symmetric (asymmetry {:e})",
                m.asymmetry()
            )));
        }
        Ok(SymMatrix(m.symmetrized()))
    }

    pub(crate) fn from_symmetric_unchecked(m: Matrix) -> Self {
        debug_assert!(m.asymmetry() <= 1e-12 * (1.0 + m.max_abs()));
        SymMatrix(m)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        SymMatrix::new(Matrix::from_rows(rows)?)
    }

    pub fn identity(dim: usize) -> Self {
        SymMatrix(Matrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        SymMatrix(Matrix::zeros(dim))
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        SymMatrix(Matrix::diagonal(diag))
    }

    pub fn scalar(value: f64) -> Self {
        SymMatrix(Matrix::scalar(value))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn add(&self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix(self.0.add(&rhs.0))
    }

    pub fn sub(&self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix(self.0.sub(&rhs.0))
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix(self.0.scale(c))
    }

    pub fn lin_comb(&self, alpha: f64, rhs: &SymMatrix, beta: f64) -> SymMatrix {
        SymMatrix(self.0.lin_comb(alpha, &rhs.0, beta))
    }

    pub fn neg(&self) -> SymMatrix {
        self.scale(-1.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    /// `½ ⟨M x, x⟩`.
    pub fn half_quadratic_form(&self, x: &[f64]) -> f64 {
        let mx = self.0.matvec(x);
        0.5 * mx.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn eig(&self) -> Result<SpectralDecomposition> {
        sym_eig(self)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.min_eigenvalue())
    }
}

impl TryFrom<Matrix> for SymMatrix {
    type Error = Error;

    fn try_from(m: Matrix) -> Result<Self> {
        SymMatrix::new(m)
    }
}

impl From<SymMatrix> for Matrix {
    fn from(m: SymMatrix) -> Matrix {
        m.0
    }
}

/// Real symmetric positive definite matrix, carrying its spectral
/// decomposition.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct PDMatrix {
    sym: SymMatrix,
    spectrum: SpectralDecomposition,
}

impl PartialEq for PDMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.sym == other.sym
    }
}

impl PDMatrix {
    /// Validates positivity: rejects unless `λ_min > 1e-12 · λ_max`.
    pub fn new(sym: SymMatrix) -> Result<Self> {
        let spectrum = sym_eig(&sym)?;
        let (min, max) = (spectrum.min_eigenvalue(), spectrum.max_eigenvalue());
        if !(max > 0.0) || !(min > POSITIVITY_FLOOR * max) {
            return Err(Error::NotPositiveDefinite { min, max });
        }
        Ok(PDMatrix { sym, spectrum })
    }

    pub fn from_matrix(m: Matrix) -> Result<Self> {
        PDMatrix::new(SymMatrix::new(m)?)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        PDMatrix::new(SymMatrix::from_rows(rows)?)
    }

    pub fn identity(dim: usize) -> Self {
        PDMatrix::new(SymMatrix::identity(dim)).expect("identity is positive definite")
    }

    pub fn scalar(value: f64) -> Result<Self> {
        PDMatrix::new(SymMatrix::scalar(value))
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        PDMatrix::new(SymMatrix::diagonal(diag))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.sym.dim()
    }

    #[inline]
    pub fn as_sym(&self) -> &SymMatrix {
        &self.sym
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix {
        self.sym.matrix()
    }

    pub fn into_sym(self) -> SymMatrix {
        self.sym
    }

    #[inline]
    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn condition_number(&self) -> f64 {
        self.spectrum.max_eigenvalue() / self.spectrum.min_eigenvalue()
    }

    pub fn sqrt(&self) -> SymMatrix {
        self.map_positive(f64::sqrt)
    }

    pub fn inv_sqrt(&self) -> SymMatrix {
        self.map_positive(|l| 1.0 / l.sqrt())
    }

    pub fn pow(&self, p: f64) -> SymMatrix {
        self.map_positive(|l| l.powf(p))
    }

    pub fn log(&self) -> SymMatrix {
        self.map_positive(f64::ln)
    }

    /// Inverse through the spectral decomposition.
    pub fn inverse(&self) -> PDMatrix {
        PDMatrix {
            sym: self.map_positive(f64::recip),
            spectrum: SpectralDecomposition {
                eigenvalues: self.spectrum.eigenvalues.iter().rev().map(|l| l.recip()).collect(),
                eigenvectors: Matrix::from_fn(self.dim(), |r, c| {
                    self.spectrum.eigenvectors[(r, self.dim() - 1 - c)]
                }),
            },
        }
    }

    pub(crate) fn map_positive(&self, phi: impl Fn(f64) -> f64) -> SymMatrix {
        self.spectrum
            .map(phi)
            .expect("function is finite on a positive spectrum")
    }

    pub fn check_dim(&self, other: &PDMatrix) -> Result<()> {
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

impl TryFrom<Matrix> for PDMatrix {
    type Error = Error;

    fn try_from(m: Matrix) -> Result<Self> {
        PDMatrix::from_matrix(m)
    }
}

impl From<PDMatrix> for Matrix {
    fn from(m: PDMatrix) -> Matrix {
        m.sym.into_matrix()
    }
}

/// `φ(M) = Q φ(Λ) Qᵀ` for a positive definite `M`.
pub fn matrix_fn(m: &PDMatrix, phi: impl Fn(f64) -> f64) -> Result<SymMatrix> {
    m.spectrum().map(phi)
}

/// `Tᵀ M T`, symmetrized.
pub fn congruence(t: &Matrix, m: &SymMatrix) -> Result<SymMatrix> {
    if t.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: t.dim(),
        });
    }
    let out = t.transpose().matmul(m.matrix()).matmul(t).symmetrized();
    Ok(SymMatrix(out))
}

/// Outcome of a Loewner-order test `X ⪯ Y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoewnerCheck {
    /// Smallest eigenvalue of `Y − X`.
    pub margin: f64,
    /// `1 + ‖X‖_F + ‖Y‖_F`.
    pub scale: f64,
    pub pass: bool,
}

/// Tests `X ⪯ Y`, i.e. `λ_min(Y − X) ≥ −tol · (1 + ‖X‖_F + ‖Y‖_F)`.
pub fn loewner_leq(x: &SymMatrix, y: &SymMatrix, tol: f64) -> Result<LoewnerCheck> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    let margin = y.sub(x).min_eigenvalue()?;
    let scale = 1.0 + x.frobenius_norm() + y.frobenius_norm();
    Ok(LoewnerCheck {
        margin,
        scale,
        pass: margin >= -tol * scale,
    })
}
