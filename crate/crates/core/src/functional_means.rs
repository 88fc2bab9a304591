//! Weighted functional means `A_p`, `H_p`, `G_p` on the grid and quadratic
//! backends, with the swap identities and the pointwise chain
//! `H_p ≤ G_p ≤ A_p`.
//!
//! At `p = 0` and `p = 1` every mean returns its first or second argument
//! unchanged, by definition.

use rayon::prelude::*;

use crate::error::Result;
use crate::functional::{ExtendedReal, Finite, GridFunctional, HarmonicPencil, Infinity, QuadraticFunctional};
use crate::matrix::{loewner_leq, SymMatrix};
use crate::operator_means::{arithmetic_mean, geometric_mean, geometric_mean_integral, harmonic_mean};
use crate::quadrature::GaussRule;
use crate::record::{checks, Instance, Margin, VerificationRecord, Witness, WitnessInputs};
use crate::weight::Weight;

/// Default number of Gauss–Jacobi nodes for the geometric mean.
pub const MEAN_NODES: usize = 64;

/// Pointwise order between two functionals of the same backend.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderGap {
    /// Least value of `upper − lower` (grid: over points where both are
    /// finite; quadratic: smallest eigenvalue of the matrix difference).
    pub margin: f64,
    /// Grid points where `lower = +∞` but `upper` is finite.
    pub infinite_violations: usize,
}

/// Operations shared by the two backends.
pub trait Functional: Sized {
    fn arithmetic(&self, g: &Self, p: Weight) -> Result<Self>;
    fn harmonic(&self, g: &Self, p: Weight) -> Result<Self>;
    fn geometric(&self, g: &Self, p: Weight, nodes: usize) -> Result<Self>;

    /// Largest pointwise (grid) or relative Frobenius (quadratic) deviation,
    /// and the number of points where exactly one side is finite.
    fn deviation(&self, other: &Self) -> (f64, usize);

    fn order_gap(&self, upper: &Self) -> Result<OrderGap>;

    fn instance(&self) -> Instance;

    fn witness(&self, g: &Self) -> Witness;
}

pub fn func_arithmetic<F: Functional>(f: &F, g: &F, p: Weight) -> Result<F> {
    f.arithmetic(g, p)
}

pub fn func_harmonic<F: Functional>(f: &F, g: &F, p: Weight) -> Result<F> {
    f.harmonic(g, p)
}

pub fn func_geometric<F: Functional>(f: &F, g: &F, p: Weight, nodes: usize) -> Result<F> {
    f.geometric(g, p, nodes)
}

/// `(1 − p) f + p g` pointwise, with `0·(+∞) = +∞`.
pub fn grid_arithmetic(f: &GridFunctional, g: &GridFunctional, p: Weight) -> Result<GridFunctional> {
    f.same_grid(g)?;
    if p.is_zero() {
        return Ok(f.clone());
    }
    if p.is_one() {
        return Ok(g.clone());
    }
    let pv = p.value();
    f.zip_with(g, |a, b| a * (1.0 - pv) + b * pv)
}

/// `H_p(f, g) = ((1 − p) f* + p g*)*`.
pub fn grid_harmonic(f: &GridFunctional, g: &GridFunctional, p: Weight) -> Result<GridFunctional> {
    f.same_grid(g)?;
    if p.is_zero() {
        return Ok(f.clone());
    }
    if p.is_one() {
        return Ok(g.clone());
    }
    Ok(HarmonicPencil::new(f, g)?.eval_functional(p.value()))
}

/// `G_p(f, g) = Σ_k w_k H_{t_k}(f, g)` with the Gauss–Jacobi rule of the
/// Beta(p, 1 − p) density. `G_p` is `+∞` outside `[max(L_f, L_g), min(R_f, R_g)]`,
/// the set where `H_t` is finite for every `t`.
pub fn grid_geometric(f: &GridFunctional, g: &GridFunctional, p: Weight, nodes: usize) -> Result<GridFunctional> {
    f.same_grid(g)?;
    if p.is_zero() {
        return Ok(f.clone());
    }
    if p.is_one() {
        return Ok(g.clone());
    }
    grid_geometric_with(&HarmonicPencil::new(f, g)?, f, p, nodes)
}

pub(crate) fn grid_geometric_with(
    pencil: &HarmonicPencil,
    f: &GridFunctional,
    p: Weight,
    nodes: usize,
) -> Result<GridFunctional> {
    p.require_interior("the quadrature of the geometric mean")?;
    let rule = GaussRule::geometric_mean_weight(p.value(), nodes)?;
    let Some(dom) = pencil.common_domain() else {
        return Err(crate::Error::Domain(
            "dom f and dom g are disjoint, so the geometric mean is +inf everywhere".into(),
        ));
    };
    let terms: Vec<Vec<ExtendedReal>> = rule.nodes.par_iter().map(|&t| pencil.eval(t)).collect();
    let values = (0..f.len())
        .map(|i| {
            if !pencil.inside(f.x(i), dom) {
                return Infinity;
            }
            let mut acc = 0.0;
            for (term, w) in terms.iter().zip(&rule.weights) {
                match term[i] {
                    Finite(v) => acc += w * v,
                    Infinity => return Infinity,
                }
            }
            Finite(acc)
        })
        .collect();
    GridFunctional::new(*f.spec(), values)
}

/// Estimated quadrature error of `G_p`: `sup |G_p(nodes) − G_p(nodes/2)|`.
pub fn grid_geometric_error(f: &GridFunctional, g: &GridFunctional, p: Weight, nodes: usize) -> Result<f64> {
    if !p.is_interior() {
        return Ok(0.0);
    }
    let pencil = HarmonicPencil::new(f, g)?;
    let fine = grid_geometric_with(&pencil, f, p, nodes)?;
    let coarse = grid_geometric_with(&pencil, f, p, (nodes / 2).max(2))?;
    Ok(crate::functional::sup_deviation(fine.values(), coarse.values()).0)
}

impl Functional for GridFunctional {
    fn arithmetic(&self, g: &Self, p: Weight) -> Result<Self> {
        grid_arithmetic(self, g, p)
    }

    fn harmonic(&self, g: &Self, p: Weight) -> Result<Self> {
        grid_harmonic(self, g, p)
    }

    fn geometric(&self, g: &Self, p: Weight, nodes: usize) -> Result<Self> {
        grid_geometric(self, g, p, nodes)
    }

    fn deviation(&self, other: &Self) -> (f64, usize) {
        crate::functional::sup_deviation(self.values(), other.values())
    }

    fn order_gap(&self, upper: &Self) -> Result<OrderGap> {
        self.same_grid(upper)?;
        let mut margin = f64::INFINITY;
        let mut infinite_violations = 0;
        for (&lo, &hi) in self.values().iter().zip(upper.values()) {
            match (lo, hi) {
                (Finite(a), Finite(b)) => margin = margin.min(b - a),
                (Infinity, Finite(_)) => infinite_violations += 1,
                // +∞ above anything holds by convention
                _ => {}
            }
        }
        Ok(OrderGap {
            margin: if margin.is_finite() { margin } else { 0.0 },
            infinite_violations,
        })
    }

    fn instance(&self) -> Instance {
        Instance {
            grid: Some(*self.spec()),
            ..Instance::default()
        }
    }

    fn witness(&self, g: &Self) -> Witness {
        Witness::grids(self, Some(g))
    }
}

impl Functional for QuadraticFunctional {
    fn arithmetic(&self, g: &Self, p: Weight) -> Result<Self> {
        self.check_dim(g)?;
        if p.is_zero() {
            return Ok(self.clone());
        }
        if p.is_one() {
            return Ok(g.clone());
        }
        match (self.pd(), g.pd()) {
            (Ok(a), Ok(b)) => Ok(QuadraticFunctional::from_pd(&arithmetic_mean(&a, &b, p)?)),
            _ => {
                let pv = p.value();
                Ok(QuadraticFunctional::new(self.matrix().lin_comb(1.0 - pv, g.matrix(), pv)))
            }
        }
    }

    fn harmonic(&self, g: &Self, p: Weight) -> Result<Self> {
        self.check_dim(g)?;
        if p.is_zero() {
            return Ok(self.clone());
        }
        if p.is_one() {
            return Ok(g.clone());
        }
        Ok(QuadraticFunctional::from_pd(&harmonic_mean(&self.pd()?, &g.pd()?, p)?))
    }

    /// Exact route through the operator geometric mean; `nodes` is unused.
    fn geometric(&self, g: &Self, p: Weight, _nodes: usize) -> Result<Self> {
        self.check_dim(g)?;
        if p.is_zero() {
            return Ok(self.clone());
        }
        if p.is_one() {
            return Ok(g.clone());
        }
        Ok(QuadraticFunctional::from_pd(&geometric_mean(&self.pd()?, &g.pd()?, p)?))
    }

    fn deviation(&self, other: &Self) -> (f64, usize) {
        (rel_dev(self.matrix(), other.matrix()), 0)
    }

    fn order_gap(&self, upper: &Self) -> Result<OrderGap> {
        let check = loewner_leq(self.matrix(), upper.matrix(), 0.0)?;
        Ok(OrderGap {
            margin: check.margin,
            infinite_violations: 0,
        })
    }

    fn instance(&self) -> Instance {
        Instance {
            dim: Some(self.dim()),
            ..Instance::default()
        }
    }

    fn witness(&self, g: &Self) -> Witness {
        Witness {
            inputs: WitnessInputs::Matrices {
                a: self.matrix().matrix().clone(),
                b: Some(g.matrix().matrix().clone()),
                t: None,
            },
            params: Default::default(),
        }
    }
}

fn rel_dev(x: &SymMatrix, y: &SymMatrix) -> f64 {
    x.sub(y).frobenius_norm() / (1.0 + y.frobenius_norm())
}

/// `G_p(f_A, f_B)` through the Gauss–Jacobi quadrature of the harmonic path;
/// must agree with the exact route.
pub fn quadratic_geometric_quadrature(
    f: &QuadraticFunctional,
    g: &QuadraticFunctional,
    p: Weight,
    nodes: usize,
) -> Result<QuadraticFunctional> {
    Ok(QuadraticFunctional::from_pd(&geometric_mean_integral(
        &f.pd()?,
        &g.pd()?,
        p,
        nodes,
    )?))
}

/// Swap identities `M_p(f, g) = M_{1−p}(g, f)` for the three means.
/// Grid deviations are sup norms over points where both sides are finite;
/// points where only one side is finite are counted and must be zero.
pub fn check_func_symmetry<F: Functional>(f: &F, g: &F, p: Weight, nodes: usize, tol: f64) -> Result<VerificationRecord> {
    let q = p.complement();
    let pairs = [
        ("arithmetic", f.arithmetic(g, p)?, g.arithmetic(f, q)?),
        ("harmonic", f.harmonic(g, p)?, g.harmonic(f, q)?),
        ("geometric", f.geometric(g, p, nodes)?, g.geometric(f, q, nodes)?),
    ];
    let mut margins = Vec::new();
    for (name, lhs, rhs) in &pairs {
        let (dev, mismatched) = lhs.deviation(rhs);
        margins.push(Margin::deviation(*name, dev, tol));
        if mismatched > 0 {
            margins.push(Margin::deviation(format!("{name}_domain_mismatch"), mismatched as f64, 0.0));
        }
    }
    let mut instance = f.instance();
    instance.p = Some(p.value());
    Ok(VerificationRecord::new(checks::FUNC_SYMMETRY, instance, margins)
        .with_witness(f.witness(g).with_p(p).with_tol(tol).with_nodes(nodes)))
}

/// The three means of one pair, reusable across checks.
#[derive(Clone, Debug)]
pub struct MeanTriple<F> {
    pub harmonic: F,
    pub geometric: F,
    pub arithmetic: F,
}

impl<F: Functional> MeanTriple<F> {
    pub fn new(f: &F, g: &F, p: Weight, nodes: usize) -> Result<Self> {
        Ok(MeanTriple {
            harmonic: f.harmonic(g, p)?,
            geometric: f.geometric(g, p, nodes)?,
            arithmetic: f.arithmetic(g, p)?,
        })
    }
}

/// `H_p ≤ G_p ≤ A_p` pointwise, each margin passing when `≥ −tol`.
/// Points where the larger side is `+∞` hold by convention.
pub fn check_eq25<F: Functional>(f: &F, g: &F, p: Weight, nodes: usize, tol: f64) -> Result<VerificationRecord> {
    let means = MeanTriple::new(f, g, p, nodes)?;
    let mut instance = f.instance();
    instance.p = Some(p.value());
    Ok(eq25_record(&means, instance, tol)?.with_witness(f.witness(g).with_p(p).with_tol(tol).with_nodes(nodes)))
}

pub(crate) fn eq25_record<F: Functional>(means: &MeanTriple<F>, instance: Instance, tol: f64) -> Result<VerificationRecord> {
    let lower = means.harmonic.order_gap(&means.geometric)?;
    let upper = means.geometric.order_gap(&means.arithmetic)?;
    let mut margins = vec![
        Margin::new("geometric_minus_harmonic", lower.margin, tol),
        Margin::new("arithmetic_minus_geometric", upper.margin, tol),
    ];
    for (name, gap) in [("harmonic_infinite_below_geometric", lower), ("geometric_infinite_below_arithmetic", upper)] {
        if gap.infinite_violations > 0 {
            margins.push(Margin::deviation(name, gap.infinite_violations as f64, 0.0));
        }
    }
    Ok(VerificationRecord::new(checks::EQ25, instance, margins))
}
