//! Weighted arithmetic, harmonic and geometric means of positive definite
//! matrices, the quadrature form of the geometric mean, and checkers for the
//! swap identities and the harmonic ≤ geometric ≤ arithmetic chain.

use crate::error::Result;
use crate::matrix::{loewner_leq, Matrix, PDMatrix, SpectralDecomposition, SymMatrix};
use crate::quadrature::GaussRule;
use crate::record::{checks, Instance, Margin, VerificationRecord, Witness};
use crate::weight::Weight;

/// `A^{1/2}` together with the spectral decomposition of
/// `C = A^{-1/2} B A^{-1/2}`; every two-variable spectral quantity is
/// `A^{1/2} φ(C) A^{1/2}` for some scalar `φ`.
pub(crate) struct RelativePencil {
    a_half: Matrix,
    inner: SpectralDecomposition,
}

impl RelativePencil {
    pub(crate) fn new(a: &PDMatrix, b: &PDMatrix) -> Result<Self> {
        a.check_dim(b)?;
        let a_half = a.sqrt().into_matrix();
        let a_inv_half = a.inv_sqrt().into_matrix();
        let c = a_inv_half.matmul(b.matrix()).matmul(&a_inv_half).symmetrized();
        let inner = crate::matrix::sym_eig(&SymMatrix::new(c)?)?;
        Ok(RelativePencil { a_half, inner })
    }

    /// `A^{1/2} φ(C) A^{1/2}`; `φ` must be finite on `(0, ∞)`.
    pub(crate) fn apply(&self, phi: impl Fn(f64) -> f64) -> SymMatrix {
        let mid = self
            .inner
            .eigenvalues
            .iter()
            .map(|&l| phi(l.max(f64::MIN_POSITIVE)))
            .collect::<Vec<_>>();
        let inner = self.inner.synthesize(&mid);
        let out = self.a_half.matmul(&inner).matmul(&self.a_half).symmetrized();
        SymMatrix::new(out).expect("congruence of a symmetric matrix is symmetric")
    }
}

/// `A ∇_p B = (1 − p) A + p B`.
pub fn arithmetic_mean(a: &PDMatrix, b: &PDMatrix, p: Weight) -> Result<PDMatrix> {
    a.check_dim(b)?;
    if p.is_zero() {
        return Ok(a.clone());
    }
    if p.is_one() {
        return Ok(b.clone());
    }
    let p = p.value();
    PDMatrix::new(a.as_sym().lin_comb(1.0 - p, b.as_sym(), p))
}

/// `A !_p B = ((1 − p) A⁻¹ + p B⁻¹)⁻¹`, inverted by Cholesky so that it
/// shares no code path with the spectral means.
pub fn harmonic_mean(a: &PDMatrix, b: &PDMatrix, p: Weight) -> Result<PDMatrix> {
    a.check_dim(b)?;
    if p.is_zero() {
        return Ok(a.clone());
    }
    if p.is_one() {
        return Ok(b.clone());
    }
    PDMatrix::from_matrix(harmonic_matrix(a.matrix(), b.matrix(), p.value())?)
}

fn harmonic_matrix(a: &Matrix, b: &Matrix, t: f64) -> Result<Matrix> {
    let a_inv = a.cholesky_inverse()?;
    let b_inv = b.cholesky_inverse()?;
    a_inv.lin_comb(1.0 - t, &b_inv, t).cholesky_inverse()
}

/// `A ♯_p B = A^{1/2} (A^{-1/2} B A^{-1/2})^p A^{1/2}`.
pub fn geometric_mean(a: &PDMatrix, b: &PDMatrix, p: Weight) -> Result<PDMatrix> {
    a.check_dim(b)?;
    if p.is_zero() {
        return Ok(a.clone());
    }
    if p.is_one() {
        return Ok(b.clone());
    }
    let pv = p.value();
    PDMatrix::new(RelativePencil::new(a, b)?.apply(|l| l.powf(pv)))
}

/// Quadrature oracle for the geometric mean:
/// `A ♯_p B = sin(pπ)/π ∫₀¹ t^{p−1} (1 − t)^{−p} (A !_t B) dt`,
/// integrated with a Gauss–Jacobi rule that absorbs both endpoint
/// singularities of the weight.
pub fn geometric_mean_integral(a: &PDMatrix, b: &PDMatrix, p: Weight, nodes: usize) -> Result<PDMatrix> {
    a.check_dim(b)?;
    p.require_interior("geometric_mean_integral")?;
    if nodes < 2 {
        return Err(crate::Error::Precondition("quadrature needs at least 2 nodes".into()));
    }
    let rule = GaussRule::geometric_mean_weight(p.value(), nodes)?;
    let a_inv = a.matrix().cholesky_inverse()?;
    let b_inv = b.matrix().cholesky_inverse()?;
    let mut acc = Matrix::zeros(a.dim());
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let h = a_inv.lin_comb(1.0 - t, &b_inv, t).cholesky_inverse()?;
        acc = acc.lin_comb(1.0, &h, w);
    }
    PDMatrix::from_matrix(acc.symmetrized())
}

/// Relative error `‖G_n − A ♯_p B‖_F / ‖A ♯_p B‖_F` of the `n`-node quadrature.
pub fn check_geometric_quadrature(a: &PDMatrix, b: &PDMatrix, p: Weight, nodes: usize, tol: f64) -> Result<VerificationRecord> {
    let exact = geometric_mean(a, b, p)?;
    let approx = geometric_mean_integral(a, b, p, nodes)?;
    let err = approx.as_sym().sub(exact.as_sym()).frobenius_norm() / exact.as_sym().frobenius_norm();
    Ok(VerificationRecord::new(
        checks::GEOMETRIC_QUADRATURE,
        pair_instance(a, Some(p)),
        vec![Margin::deviation("relative_error", err, tol)],
    )
    .with_witness(Witness::matrices(a, b, None).with_p(p).with_tol(tol).with_nodes(nodes)))
}

/// Relative Frobenius deviation `‖X − Y‖_F / (1 + ‖Y‖_F)`.
pub(crate) fn rel_dev(x: &SymMatrix, y: &SymMatrix) -> f64 {
    x.sub(y).frobenius_norm() / (1.0 + y.frobenius_norm())
}

fn pair_instance(a: &PDMatrix, p: Option<Weight>) -> Instance {
    Instance {
        dim: Some(a.dim()),
        p: p.map(Weight::value),
        ..Instance::default()
    }
}

/// Swap identities `A ∇_p B = B ∇_{1−p} A`, and the same for `!` and `♯`.
/// Deviations are relative Frobenius norms; pass iff each is at most `tol`.
pub fn check_mean_symmetry(a: &PDMatrix, b: &PDMatrix, p: Weight, tol: f64) -> Result<VerificationRecord> {
    let q = p.complement();
    let arith = rel_dev(arithmetic_mean(a, b, p)?.as_sym(), arithmetic_mean(b, a, q)?.as_sym());
    let harm = rel_dev(harmonic_mean(a, b, p)?.as_sym(), harmonic_mean(b, a, q)?.as_sym());
    let geo = rel_dev(geometric_mean(a, b, p)?.as_sym(), geometric_mean(b, a, q)?.as_sym());
    Ok(VerificationRecord::new(
        checks::MEAN_SYMMETRY,
        pair_instance(a, Some(p)),
        vec![
            Margin::deviation("arithmetic", arith, tol),
            Margin::deviation("harmonic", harm, tol),
            Margin::deviation("geometric", geo, tol),
        ],
    )
    .with_witness(Witness::matrices(a, b, None).with_p(p).with_tol(tol)))
}

/// `A !_p B ⪯ A ♯_p B ⪯ A ∇_p B` with slack `tol · (1 + ‖X‖_F + ‖Y‖_F)`.
pub fn check_agh(a: &PDMatrix, b: &PDMatrix, p: Weight, tol: f64) -> Result<VerificationRecord> {
    let h = harmonic_mean(a, b, p)?;
    let g = geometric_mean(a, b, p)?;
    let ar = arithmetic_mean(a, b, p)?;
    let lower = loewner_leq(h.as_sym(), g.as_sym(), tol)?;
    let upper = loewner_leq(g.as_sym(), ar.as_sym(), tol)?;
    Ok(VerificationRecord::new(
        checks::AGH,
        pair_instance(a, Some(p)),
        vec![
            Margin::new("geometric_minus_harmonic", lower.margin, tol * lower.scale),
            Margin::new("arithmetic_minus_geometric", upper.margin, tol * upper.scale),
        ],
    )
    .with_witness(Witness::matrices(a, b, None).with_p(p).with_tol(tol)))
}
