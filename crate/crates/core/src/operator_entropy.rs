//! Relative operator entropy `S(A|B)`, Tsallis entropy `T_p(A|B)`, Furuta's
//! parametric entropy `S_p(A|B)`, the identity expressing `S_p` through the
//! geometric mean, and the operator inequality checkers.

use crate::error::{Error, Result};
use crate::matrix::{congruence, loewner_leq, Matrix, PDMatrix, SymMatrix};
use crate::operator_means::{geometric_mean, rel_dev, RelativePencil};
use crate::quadrature::GaussRule;
use crate::record::{checks, Instance, Margin, VerificationRecord, Witness};
use crate::weight::Weight;

/// `S(A|B) = A^{1/2} log(A^{-1/2} B A^{-1/2}) A^{1/2}`.
pub fn relative_entropy(a: &PDMatrix, b: &PDMatrix) -> Result<SymMatrix> {
    Ok(RelativePencil::new(a, b)?.apply(f64::ln))
}

/// Nodes per Gauss–Legendre panel in [`relative_entropy_integral`].
const PANEL_NODES: usize = 32;

/// `S(A|B) = ∫₀¹ (A !_t B − A)/t dt` by composite Gauss–Legendre.
///
/// The integrand is evaluated in the form `M_t⁻¹ (I − B⁻¹A)` with
/// `M_t = (1 − t)A⁻¹ + tB⁻¹`, which equals `(A !_t B − A)/t` for `t > 0` and
/// the limit `A − A B⁻¹ A` at `t = 0`, so no cancellation occurs near the
/// origin. Only Cholesky factorizations are used.
pub fn relative_entropy_integral(a: &PDMatrix, b: &PDMatrix, nodes: usize) -> Result<SymMatrix> {
    a.check_dim(b)?;
    if nodes < 2 {
        return Err(Error::Precondition("quadrature needs at least 2 nodes".into()));
    }
    let panels = (nodes / PANEL_NODES).max(1);
    let per_panel = nodes.div_ceil(panels);
    let rule = GaussRule::composite_legendre(0.0, 1.0, panels, per_panel)?;

    let n = a.dim();
    let a_inv = a.matrix().cholesky_inverse()?;
    let b_inv = b.matrix().cholesky_inverse()?;
    let tail = Matrix::identity(n).sub(&b.matrix().cholesky_solve(a.matrix())?);
    let mut acc = Matrix::zeros(n);
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let m_t = a_inv.lin_comb(1.0 - t, &b_inv, t);
        acc = acc.lin_comb(1.0, &m_t.cholesky_solve(&tail)?, w);
    }
    SymMatrix::new(acc.symmetrized())
}

/// The lower end of the entropy sandwich, `A − A B⁻¹ A`.
pub fn entropy_lower_bound(a: &PDMatrix, b: &PDMatrix) -> Result<SymMatrix> {
    a.check_dim(b)?;
    let ab_inv_a = a.matrix().matmul(&b.matrix().cholesky_solve(a.matrix())?);
    SymMatrix::new(a.matrix().sub(&ab_inv_a).symmetrized())
}

/// `T_p(A|B) = (A ♯_p B − A)/p` for `p ∈ (0, 1]`, evaluated as
/// `A^{1/2} ((C^p − I)/p) A^{1/2}` with `(λ^p − 1)/p = expm1(p ln λ)/p`.
pub fn tsallis_entropy(a: &PDMatrix, b: &PDMatrix, p: Weight) -> Result<SymMatrix> {
    p.require_nonzero("the Tsallis relative operator entropy")?;
    a.check_dim(b)?;
    if p.is_one() {
        return Ok(b.as_sym().sub(a.as_sym()));
    }
    let pv = p.value();
    Ok(RelativePencil::new(a, b)?.apply(|l| (pv * l.ln()).exp_m1() / pv))
}

/// `S_p(A|B) = A^{1/2} C^p log(C) A^{1/2}` with `C = A^{-1/2} B A^{-1/2}`.
pub fn furuta_entropy(a: &PDMatrix, b: &PDMatrix, p: Weight) -> Result<SymMatrix> {
    let pv = p.value();
    Ok(RelativePencil::new(a, b)?.apply(|l| l.powf(pv) * l.ln()))
}

/// Both right-hand sides of
/// `S_p(A|B) = −S(A ♯_p B | A)/p = S(A ♯_p B | B)/(1 − p)`.
pub fn furuta_via_identity(a: &PDMatrix, b: &PDMatrix, p: Weight) -> Result<(SymMatrix, SymMatrix)> {
    p.require_interior("furuta_via_identity")?;
    let g = geometric_mean(a, b, p)?;
    let pv = p.value();
    let via_a = relative_entropy(&g, a)?.scale(-1.0 / pv);
    let via_b = relative_entropy(&g, b)?.scale(1.0 / (1.0 - pv));
    Ok((via_a, via_b))
}

/// Same identity with the relative entropies computed by quadrature instead
/// of spectral calculus.
pub fn furuta_via_identity_integral(
    a: &PDMatrix,
    b: &PDMatrix,
    p: Weight,
    nodes: usize,
) -> Result<(SymMatrix, SymMatrix)> {
    p.require_interior("furuta_via_identity_integral")?;
    let g = geometric_mean(a, b, p)?;
    let pv = p.value();
    let via_a = relative_entropy_integral(&g, a, nodes)?.scale(-1.0 / pv);
    let via_b = relative_entropy_integral(&g, b, nodes)?.scale(1.0 / (1.0 - pv));
    Ok((via_a, via_b))
}

/// Frobenius error of the `n`-node quadrature of `S(A|B)`.
pub fn check_entropy_quadrature(a: &PDMatrix, b: &PDMatrix, nodes: usize, tol: f64) -> Result<VerificationRecord> {
    let err = relative_entropy_integral(a, b, nodes)?
        .sub(&relative_entropy(a, b)?)
        .frobenius_norm();
    Ok(VerificationRecord::new(
        checks::ENTROPY_QUADRATURE,
        instance(a, None),
        vec![Margin::deviation("error", err, tol)],
    )
    .with_witness(Witness::matrices(a, b, None).with_tol(tol).with_nodes(nodes)))
}

fn instance(a: &PDMatrix, p: Option<Weight>) -> Instance {
    Instance {
        dim: Some(a.dim()),
        p: p.map(Weight::value),
        ..Instance::default()
    }
}

/// Both identity forms against the direct definition, relative Frobenius
/// deviation `‖form − S_p‖_F / (1 + ‖S_p‖_F) ≤ tol`.
pub fn check_eqp(a: &PDMatrix, b: &PDMatrix, p: Weight, tol: f64) -> Result<VerificationRecord> {
    let direct = furuta_entropy(a, b, p)?;
    let (via_a, via_b) = furuta_via_identity(a, b, p)?;
    Ok(VerificationRecord::new(
        checks::EQP_IDENTITY,
        instance(a, Some(p)),
        vec![
            Margin::deviation("via_a", rel_dev(&via_a, &direct), tol),
            Margin::deviation("via_b", rel_dev(&via_b, &direct), tol),
        ],
    )
    .with_witness(Witness::matrices(a, b, None).with_p(p).with_tol(tol)))
}

/// `S_p(A|B) = −S_{1−p}(B|A)`.
pub fn check_furuta_skew(a: &PDMatrix, b: &PDMatrix, p: Weight, tol: f64) -> Result<VerificationRecord> {
    let lhs = furuta_entropy(a, b, p)?;
    let rhs = furuta_entropy(b, a, p.complement())?.neg();
    Ok(VerificationRecord::new(
        checks::FURUTA_SKEW,
        instance(a, Some(p)),
        vec![Margin::deviation("skew", rel_dev(&lhs, &rhs), tol)],
    )
    .with_witness(Witness::matrices(a, b, None).with_p(p).with_tol(tol)))
}

/// `Tᵀ S(A|B) T = S(TᵀAT | TᵀBT)`, relative Frobenius deviation.
pub fn check_congruence_property(a: &PDMatrix, b: &PDMatrix, t: &Matrix, tol: f64) -> Result<VerificationRecord> {
    let lhs = congruence(t, &relative_entropy(a, b)?)?;
    let ta = PDMatrix::new(congruence(t, a.as_sym())?)?;
    let tb = PDMatrix::new(congruence(t, b.as_sym())?)?;
    let rhs = relative_entropy(&ta, &tb)?;
    Ok(VerificationRecord::new(
        checks::CONGRUENCE,
        instance(a, None),
        vec![Margin::deviation("congruence", rel_dev(&rhs, &lhs), tol)],
    )
    .with_witness(Witness::matrices(a, b, Some(t)).with_tol(tol)))
}

/// `S(A|I) = −A log A`, with the right side formed as a plain product.
pub fn check_entropy_at_identity(a: &PDMatrix, tol: f64) -> Result<VerificationRecord> {
    let lhs = relative_entropy(a, &PDMatrix::identity(a.dim()))?;
    let rhs = SymMatrix::new(a.matrix().matmul(a.log().matrix()).scale(-1.0).symmetrized())?;
    Ok(VerificationRecord::new(
        checks::ENTROPY_AT_IDENTITY,
        instance(a, None),
        vec![Margin::deviation("a_log_a", rel_dev(&lhs, &rhs), tol)],
    )
    .with_witness(Witness::single_matrix(a).with_tol(tol)))
}

/// `A − A B⁻¹ A ⪯ S(A|B) ⪯ B − A`.
pub fn check_entropy_bounds(a: &PDMatrix, b: &PDMatrix, tol: f64) -> Result<VerificationRecord> {
    let s = relative_entropy(a, b)?;
    let lower = loewner_leq(&entropy_lower_bound(a, b)?, &s, tol)?;
    let upper = loewner_leq(&s, &b.as_sym().sub(a.as_sym()), tol)?;
    Ok(VerificationRecord::new(
        checks::ENTROPY_BOUNDS,
        instance(a, None),
        vec![
            Margin::new("entropy_minus_lower", lower.margin, tol * lower.scale),
            Margin::new("upper_minus_entropy", upper.margin, tol * upper.scale),
        ],
    )
    .with_witness(Witness::matrices(a, b, None).with_tol(tol)))
}

/// The three sides of the Tsallis sandwich for `S_p(A|B)`:
/// `½(G T_{1−p}(B⁻¹|A⁻¹) G + T_p(A|B))` and
/// `½(−T_{1−p}(B|A) − G T_p(A⁻¹|B⁻¹) G)` around `S_p(A|B)`, `G = A ♯_p B`.
#[derive(Clone, Debug)]
pub struct TsallisSandwich {
    pub lower: SymMatrix,
    pub middle: SymMatrix,
    pub upper: SymMatrix,
}

pub fn corollary42_sandwich(a: &PDMatrix, b: &PDMatrix, p: Weight) -> Result<TsallisSandwich> {
    p.require_interior("the Tsallis sandwich")?;
    let q = p.complement();
    let g = geometric_mean(a, b, p)?;
    let (a_inv, b_inv) = (a.inverse(), b.inverse());
    let inner_lo = tsallis_entropy(&b_inv, &a_inv, q)?;
    let inner_hi = tsallis_entropy(&a_inv, &b_inv, p)?;
    let lower = congruence(g.matrix(), &inner_lo)?
        .add(&tsallis_entropy(a, b, p)?)
        .scale(0.5);
    let upper = tsallis_entropy(b, a, q)?
        .neg()
        .sub(&congruence(g.matrix(), &inner_hi)?)
        .scale(0.5);
    Ok(TsallisSandwich {
        lower,
        middle: furuta_entropy(a, b, p)?,
        upper,
    })
}

pub fn check_corollary42(a: &PDMatrix, b: &PDMatrix, p: Weight, tol: f64) -> Result<VerificationRecord> {
    let sw = corollary42_sandwich(a, b, p)?;
    let lower = loewner_leq(&sw.lower, &sw.middle, tol)?;
    let upper = loewner_leq(&sw.middle, &sw.upper, tol)?;
    Ok(VerificationRecord::new(
        checks::COROLLARY42,
        instance(a, Some(p)),
        vec![
            Margin::new("entropy_minus_lower", lower.margin, tol * lower.scale),
            Margin::new("upper_minus_entropy", upper.margin, tol * upper.scale),
        ],
    )
    .with_witness(Witness::matrices(a, b, None).with_p(p).with_tol(tol)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::random_spd;
    use std::f64::consts::E;

    fn w(p: f64) -> Weight {
        Weight::new(p).unwrap()
    }

    fn scalar(v: f64) -> PDMatrix {
        PDMatrix::scalar(v).unwrap()
    }

    fn val(m: &SymMatrix) -> f64 {
        assert_eq!(m.dim(), 1);
        m.matrix()[(0, 0)]
    }

    #[test]
    fn relative_entropy_examples() {
        let a = random_spd(4, 21, 100.0);
        assert!(relative_entropy(&a, &a).unwrap().frobenius_norm() < 1e-13);
        assert!((val(&relative_entropy(&scalar(1.0), &scalar(E)).unwrap()) - 1.0).abs() < 1e-15);
        let a = PDMatrix::diagonal(&[1.0, 2.0]).unwrap();
        let b = PDMatrix::diagonal(&[E, 2.0 * E]).unwrap();
        let s = relative_entropy(&a, &b).unwrap();
        assert!(s.sub(&SymMatrix::diagonal(&[1.0, 2.0])).frobenius_norm() < 1e-14);
    }

    #[test]
    fn relative_entropy_integral_examples() {
        let s = relative_entropy_integral(&scalar(1.0), &scalar(4.0), 128).unwrap();
        assert!((val(&s) - 4f64.ln()).abs() < 1e-8);
        let a = random_spd(3, 2, 100.0);
        assert!(relative_entropy_integral(&a, &a, 32).unwrap().frobenius_norm() < 1e-14);
        let b = random_spd(4, 3, 100.0);
        let a = random_spd(4, 4, 100.0);
        let spectral = relative_entropy(&a, &b).unwrap();
        let integral = relative_entropy_integral(&a, &b, 128).unwrap();
        assert!(rel_dev(&integral, &spectral) < 1e-7);
    }

    #[test]
    fn integral_error_decreases_with_nodes() {
        let a = random_spd(4, 31, 100.0);
        let b = random_spd(4, 32, 100.0);
        let exact = relative_entropy(&a, &b).unwrap();
        let errs: Vec<f64> = [4, 8, 16, 128]
            .iter()
            .map(|&n| rel_dev(&relative_entropy_integral(&a, &b, n).unwrap(), &exact))
            .collect();
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
        assert!(errs[3] < 1e-12, "{errs:?}");
    }

    #[test]
    fn tsallis_examples() {
        assert!((val(&tsallis_entropy(&scalar(1.0), &scalar(4.0), Weight::HALF).unwrap()) - 2.0).abs() < 1e-14);
        let a = random_spd(3, 5, 100.0);
        let b = random_spd(3, 6, 100.0);
        let t1 = tsallis_entropy(&a, &b, Weight::ONE).unwrap();
        assert!(t1.sub(&b.as_sym().sub(a.as_sym())).frobenius_norm() < 1e-14);
        assert!(tsallis_entropy(&a, &a, w(0.4)).unwrap().frobenius_norm() < 1e-13);
        assert!(matches!(tsallis_entropy(&a, &b, Weight::ZERO), Err(Error::Domain(_))));
    }

    #[test]
    fn tsallis_approaches_relative_entropy() {
        let a = random_spd(4, 7, 100.0);
        let b = random_spd(4, 8, 100.0);
        let t = tsallis_entropy(&a, &b, w(1e-4)).unwrap();
        let s = relative_entropy(&a, &b).unwrap();
        assert!(t.sub(&s).frobenius_norm() <= 1e-3 * s.frobenius_norm());
    }

    #[test]
    fn furuta_examples() {
        let v = val(&furuta_entropy(&scalar(1.0), &scalar(E), Weight::HALF).unwrap());
        assert!((v - E.sqrt()).abs() < 1e-15);
        let a = random_spd(3, 9, 100.0);
        for p in [0.0, 0.5, 1.0] {
            assert!(furuta_entropy(&a, &a, w(p)).unwrap().frobenius_norm() < 1e-13);
        }
        let b = random_spd(3, 10, 100.0);
        let s0 = furuta_entropy(&a, &b, Weight::ZERO).unwrap();
        assert!(s0.sub(&relative_entropy(&a, &b).unwrap()).frobenius_norm() < 1e-10);
        let s1 = furuta_entropy(&a, &b, Weight::ONE).unwrap();
        assert!(rel_dev(&s1, &relative_entropy(&b, &a).unwrap().neg()) < 1e-10);
    }

    #[test]
    fn identity_scalar_chain() {
        // −S(2|1)/½ = −2·(2 ln ½) = 4 ln 2 = S(2|4)/½ = 1·4^{1/2}·ln 4
        let (via_a, via_b) = furuta_via_identity(&scalar(1.0), &scalar(4.0), Weight::HALF).unwrap();
        let want = 2.0 * 4f64.ln();
        assert!((val(&via_a) - want).abs() < 1e-14);
        assert!((val(&via_b) - want).abs() < 1e-14);
        let a = random_spd(2, 1, 10.0);
        let (x, y) = furuta_via_identity(&a, &a, w(0.3)).unwrap();
        assert!(x.frobenius_norm() < 1e-12 && y.frobenius_norm() < 1e-12);
        assert!(furuta_via_identity(&a, &a, Weight::ZERO).is_err());
    }

    #[test]
    fn identity_on_random_pair() {
        let a = random_spd(5, 40, 100.0);
        let b = random_spd(5, 41, 100.0);
        let rec = check_eqp(&a, &b, w(0.3), 1e-9).unwrap();
        assert!(rec.pass, "{rec:?}");
    }

    #[test]
    fn congruence_examples() {
        let a = random_spd(3, 50, 100.0);
        let b = random_spd(3, 51, 100.0);
        let rec = check_congruence_property(&a, &b, &Matrix::identity(3), 1e-8).unwrap();
        assert!(rec.margins[0].value.abs() < 1e-14);
        let rec = check_congruence_property(&a, &b, &Matrix::identity(3).scale(3.0), 1e-8).unwrap();
        assert!(rec.pass);
        // both sides scale by c²
        let s = relative_entropy(&a, &b).unwrap();
        let lhs = congruence(&Matrix::identity(3).scale(3.0), &s).unwrap();
        assert!(rel_dev(&lhs, &s.scale(9.0)) < 1e-15);
    }

    #[test]
    fn entropy_bounds_examples() {
        let a = random_spd(3, 60, 100.0);
        let rec = check_entropy_bounds(&a, &a, 1e-8).unwrap();
        assert!(rec.pass);
        assert!(rec.margins.iter().all(|m| m.value.abs() < 1e-12));
        // 1 − e⁻¹ ≤ 1 ≤ e − 1
        let rec = check_entropy_bounds(&scalar(1.0), &scalar(E), 1e-8).unwrap();
        assert!((rec.margins[0].value - (1.0 - (1.0 - 1.0 / E))).abs() < 1e-14);
        assert!((rec.margins[1].value - (E - 2.0)).abs() < 1e-14);
    }

    #[test]
    fn corollary42_scalars() {
        // lower = ½(2·0.5·2 + 2) = 2, middle = 2 ln 4, upper = ½(4 + 4) = 4
        let sw = corollary42_sandwich(&scalar(1.0), &scalar(4.0), Weight::HALF).unwrap();
        assert!((val(&sw.lower) - 2.0).abs() < 1e-14);
        assert!((val(&sw.middle) - 2.0 * 4f64.ln()).abs() < 1e-14);
        assert!((val(&sw.upper) - 4.0).abs() < 1e-14);
        let rec = check_corollary42(&scalar(1.0), &scalar(4.0), Weight::HALF, 1e-8).unwrap();
        assert!(rec.pass && rec.margins.iter().all(|m| m.value > 0.0));

        let a = random_spd(3, 70, 100.0);
        let sw = corollary42_sandwich(&a, &a, w(0.6)).unwrap();
        for m in [&sw.lower, &sw.middle, &sw.upper] {
            assert!(m.frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn entropy_at_identity_matches_a_log_a() {
        let a = random_spd(6, 80, 100.0);
        assert!(check_entropy_at_identity(&a, 1e-9).unwrap().pass);
    }
}
