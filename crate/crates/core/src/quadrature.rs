//! Gaussian quadrature on `(0, 1)` via the Golub–Welsch algorithm.
//!
//! Nodes are the eigenvalues of the Jacobi matrix of the three-term
//! recurrence; weights are the squared first components of the normalized
//! eigenvectors times the zeroth moment. Only the first row of the eigenvector
//! matrix is accumulated, so a rule costs `O(n²)`.

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Nodes in `(0, 1)` ascending, with matching weights.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }

    /// Gauss rule for the weight `t^β (1 − t)^α` on `(0, 1)`, `α, β > −1`.
    /// Weights sum to `B(α + 1, β + 1)`.
    pub fn jacobi(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("quadrature needs at least one node".into()));
        }
        if !(alpha > -1.0 && beta > -1.0) {
            return Err(Error::Domain(format!(
                "Jacobi exponents must exceed -1 (alpha = {alpha}, beta = {beta})"
            )));
        }
        let (mut diag, mut off) = jacobi_recurrence(n, alpha, beta);
        let mut first = vec![0.0; n];
        first[0] = 1.0;
        tridiagonal_ql(&mut diag, &mut off, &mut first)?;

        let mu0 = gamma(alpha + 1.0) * gamma(beta + 1.0) / gamma(alpha + beta + 2.0);
        let mut pairs: Vec<(f64, f64)> = diag
            .iter()
            .zip(&first)
            .map(|(&x, &z)| (0.5 * (1.0 + x), mu0 * z * z))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(GaussRule { nodes, weights })
    }

    /// Rule for the Beta(p, 1 − p) density `sin(pπ)/π · t^{p−1} (1 − t)^{−p}`,
    /// the weight of the integral representation of the geometric mean.
    /// Since `B(p, 1 − p) = π / sin(pπ)`, the weights sum to one.
    pub fn geometric_mean_weight(p: f64, n: usize) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Precondition(format!(
                "geometric mean weight needs p in (0, 1), got {p}"
            )));
        }
        let mut rule = GaussRule::jacobi(n, -p, p - 1.0)?;
        let norm = (p * std::f64::consts::PI).sin() / std::f64::consts::PI;
        for w in rule.weights.iter_mut() {
            *w *= norm;
        }
        Ok(rule)
    }

    /// Gauss–Legendre rule on `[a, b]`.
    pub fn legendre(n: usize, a: f64, b: f64) -> Result<Self> {
        let unit = GaussRule::jacobi(n, 0.0, 0.0)?;
        let len = b - a;
        Ok(GaussRule {
            nodes: unit.nodes.iter().map(|t| a + len * t).collect(),
            weights: unit.weights.iter().map(|w| w * len).collect(),
        })
    }

    /// `panels` equal Gauss–Legendre panels of `per_panel` nodes on `[a, b]`.
    pub fn composite_legendre(a: f64, b: f64, panels: usize, per_panel: usize) -> Result<Self> {
        if panels == 0 {
            return Err(Error::Precondition("composite rule needs at least one panel".into()));
        }
        let unit = GaussRule::jacobi(per_panel, 0.0, 0.0)?;
        let width = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * per_panel);
        let mut weights = Vec::with_capacity(panels * per_panel);
        for k in 0..panels {
            let lo = a + width * k as f64;
            for (t, w) in unit.nodes.iter().zip(&unit.weights) {
                nodes.push(lo + width * t);
                weights.push(w * width);
            }
        }
        Ok(GaussRule { nodes, weights })
    }
}

/// Jacobi matrix for the weight `(1 − x)^α (1 + x)^β` on `[−1, 1]`:
/// diagonal `a_k` and off-diagonal `b_k` (`off[k]` couples `k` and `k + 1`).
fn jacobi_recurrence(n: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = alpha + beta;
    let diag = (0..n)
        .map(|k| {
            if k == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                let s = 2.0 * k as f64 + ab;
                (beta * beta - alpha * alpha) / (s * (s + 2.0))
            }
        })
        .collect();
    let mut off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            let s = 2.0 * k + ab;
            let b2 = if k == 1.0 {
                // (k + α + β) cancels between numerator and denominator
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            b2.sqrt()
        })
        .collect();
    off.push(0.0);
    (diag, off)
}

/// Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix,
/// accumulating only the first row of the eigenvector matrix in `first`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], first: &mut [f64]) -> Result<()> {
    const MAX_ITER: usize = 60;
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER {
                return Err(Error::NoConvergence {
                    sweeps: iter,
                    residual: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let z = first[i + 1];
                first[i + 1] = s * first[i] + c * z;
                first[i] = c * first[i] - s * z;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
