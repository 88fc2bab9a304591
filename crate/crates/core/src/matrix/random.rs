use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{Matrix, PDMatrix, SpectralDecomposition, SymMatrix};

/// Haar-distributed orthogonal matrix: Gram–Schmidt on a Gaussian matrix with
/// the column signs fixed by the diagonal of `R`.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Matrix {
    loop {
        let g = Matrix::from_fn(dim, |_, _| rng.sample(StandardNormal));
        if let Some(q) = modified_gram_schmidt(&g) {
            return q;
        }
    }
}

fn modified_gram_schmidt(g: &Matrix) -> Option<Matrix> {
    let n = g.dim();
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..n {
        for k in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let qk = &done[k];
            let cj = &mut rest[0];
            let dot: f64 = qk.iter().zip(cj.iter()).map(|(a, b)| a * b).sum();
            for (c, q) in cj.iter_mut().zip(qk) {
                *c -= dot * q;
            }
        }
        let norm = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        for c in cols[j].iter_mut() {
            *c /= norm;
        }
    }
    Some(Matrix::from_fn(n, |i, j| cols[j][i]))
}

/// Random SPD matrix `Q diag(λ) Qᵀ` with `Q` Haar-orthogonal and eigenvalues
/// log-uniform in `[1/√κ, √κ]`, so the condition number is at most `κ`.
pub fn random_spd_with<R: Rng + ?Sized>(rng: &mut R, dim: usize, cond_cap: f64) -> PDMatrix {
    assert!(dim >= 1, "dimension must be positive");
    assert!(cond_cap >= 1.0, "condition cap must be at least 1");
    // shrink slightly so round-off in the synthesis cannot push κ past the cap
    let half_log = 0.5 * cond_cap.ln() * (1.0 - 1e-9);
    let eigenvalues: Vec<f64> = (0..dim)
        .map(|_| (half_log * (2.0 * rng.random::<f64>() - 1.0)).exp())
        .collect();
    let q = random_orthogonal(rng, dim);
    let synth = SpectralDecomposition {
        eigenvalues,
        eigenvectors: q,
    };
    let sym = SymMatrix::new(synth.synthesize(&synth.eigenvalues)).expect("finite symmetric synthesis");
    PDMatrix::new(sym).expect("eigenvalues bounded away from zero")
}

/// Deterministic in `seed`: the same seed yields a bitwise-identical matrix.
pub fn random_spd(dim: usize, seed: u64, cond_cap: f64) -> PDMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_spd_with(&mut rng, dim, cond_cap)
}

/// Gaussian matrix redrawn until its smallest singular value is at least
/// `sigma_min`.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, dim: usize, sigma_min: f64) -> Matrix {
    loop {
        let t = Matrix::from_fn(dim, |_, _| rng.sample(StandardNormal));
        let gram = SymMatrix::from_symmetric_unchecked(t.transpose().matmul(&t).symmetrized());
        if let Ok(min) = gram.min_eigenvalue() {
            if min.max(0.0).sqrt() >= sigma_min {
                return t;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::sym_eig;

    #[test]
    fn scalar_is_positive_and_reproducible() {
        let a = random_spd(1, 42, 100.0);
        let b = random_spd(1, 42, 100.0);
        assert!(a.matrix()[(0, 0)] > 0.0);
        assert_eq!(a.matrix().as_slice(), b.matrix().as_slice());
    }

    #[test]
    fn condition_cap_respected() {
        let m = random_spd(4, 7, 100.0);
        let d = sym_eig(m.as_sym()).unwrap();
        assert!(d.max_eigenvalue() / d.min_eigenvalue() <= 100.0);
    }

    #[test]
    fn same_seed_bitwise_identical() {
        let a = random_spd(6, 123, 50.0);
        let b = random_spd(6, 123, 50.0);
        let bits = |m: &PDMatrix| m.matrix().as_slice().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        assert_ne!(bits(&a), bits(&random_spd(6, 124, 50.0)));
    }

    #[test]
    fn orthogonal_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = random_orthogonal(&mut rng, 7);
        let err = q.transpose().matmul(&q).sub(&Matrix::identity(7)).frobenius_norm();
        assert!(err < 1e-13);
    }

    #[test]
    fn invertible_respects_singular_value_floor() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = random_invertible(&mut rng, 5, 1e-3);
        let gram = SymMatrix::new(t.transpose().matmul(&t)).unwrap();
        assert!(gram.min_eigenvalue().unwrap().sqrt() >= 1e-3);
    }
}
