//! Functional entropies: the relative entropy `S(f|g)`, the Tsallis entropy
//! `T_p(f|g)` and its conjugate form `T*_p(f|g)`, the parametric entropy
//! `S_p(f|g)`, and checkers for the inequalities relating them.
//!
//! On the grid backend `S(f|g) = ∫₀¹ (H_t(f, g) − f)/t dt` is integrated by
//! composite Gauss–Legendre on `[T_MIN, 1]`, and the sliver `[0, T_MIN]` by the
//! trapezoid rule with the integrand at `0` extrapolated from `T_MIN` and
//! `2·T_MIN`. On the quadratic backend every entropy is the quadratic form of
//! the matching operator entropy.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::{
    default_dual_spec, quadratic_conjugate, require_convex, sampled_sup, subdifferential_with, sup_deviation,
    ExtendedReal, Finite, GridFunctional, GridSpec, HarmonicPencil, Hull, Infinity, QuadraticFunctional,
};
use crate::functional_means::{
    eq25_record, grid_arithmetic, grid_geometric, grid_geometric_with, Functional, MeanTriple, MEAN_NODES,
};
use crate::matrix::{congruence, loewner_leq, PDMatrix, SymMatrix};
use crate::operator_entropy::{corollary42_sandwich, furuta_entropy, relative_entropy, tsallis_entropy};
use crate::operator_means::{geometric_mean, harmonic_mean};
use crate::quadrature::GaussRule;
use crate::record::{checks, Instance, Margin, VerificationRecord, Witness};
use crate::weight::Weight;

/// Default number of Gauss–Legendre nodes for entropy integrals.
pub const ENTROPY_NODES: usize = 128;
/// Lower end of the Gauss–Legendre range; `[0, T_MIN]` is patched.
pub const T_MIN: f64 = 1e-4;
/// Points sampled from a subdifferential interval, endpoints included.
pub const SUBDIFF_SAMPLES: usize = 11;
/// Default multiplier of the discretization slack `C·(h + quadrature error)`.
pub const SLACK_C: f64 = 10.0;

const PANEL_NODES: usize = 32;

/// Node counts for the geometric mean and for entropy integrals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub mean_nodes: usize,
    pub entropy_nodes: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            mean_nodes: MEAN_NODES,
            entropy_nodes: ENTROPY_NODES,
        }
    }
}

/// Entropies shared by the two backends. For the grid backend
/// `tsallis_conj` lives on the default dual grid of the pair.
pub trait Entropy: Functional {
    fn relative_entropy(&self, g: &Self, q: &Quadrature) -> Result<Self>;
    fn tsallis(&self, g: &Self, p: Weight, q: &Quadrature) -> Result<Self>;
    fn tsallis_conj(&self, g: &Self, p: Weight, q: &Quadrature) -> Result<Self>;
    fn furuta(&self, g: &Self, p: Weight, q: &Quadrature) -> Result<Self>;
}

pub fn func_relative_entropy<F: Entropy>(f: &F, g: &F, q: &Quadrature) -> Result<F> {
    f.relative_entropy(g, q)
}

pub fn func_tsallis<F: Entropy>(f: &F, g: &F, p: Weight, q: &Quadrature) -> Result<F> {
    f.tsallis(g, p, q)
}

pub fn func_tsallis_conj<F: Entropy>(f: &F, g: &F, p: Weight, q: &Quadrature) -> Result<F> {
    f.tsallis_conj(g, p, q)
}

pub fn func_furuta<F: Entropy>(f: &F, g: &F, p: Weight, q: &Quadrature) -> Result<F> {
    f.furuta(g, p, q)
}

fn entropy_rule(nodes: usize) -> Result<GaussRule> {
    if nodes < 2 {
        return Err(Error::Precondition("quadrature needs at least 2 nodes".into()));
    }
    let panels = (nodes / PANEL_NODES).max(1);
    GaussRule::composite_legendre(T_MIN, 1.0, panels, nodes.div_ceil(panels))
}

/// `S(f|g)` on the grid. Finite exactly on `dom f ∩ [L_g, R_g]`.
///
/// `f` must coincide with its convex envelope: where `f > f**` the integrand
/// behaves like `(f** − f)/t` and the entropy is `−∞`, which has no
/// representation, so such inputs are rejected with [`Error::NotConvex`].
pub fn grid_relative_entropy(f: &GridFunctional, g: &GridFunctional, nodes: usize) -> Result<GridFunctional> {
    f.same_grid(g)?;
    require_convex(f)?;
    relative_entropy_with(&HarmonicPencil::new(f, g)?, f, nodes)
}

fn relative_entropy_with(pencil: &HarmonicPencil, f: &GridFunctional, nodes: usize) -> Result<GridFunctional> {
    let rule = entropy_rule(nodes)?;
    let dom_g = pencil.dom_g();
    let (idx, fv): (Vec<usize>, Vec<f64>) = f
        .finite_points()
        .filter(|(_, x, _)| pencil.inside(*x, dom_g))
        .map(|(i, _, y)| (i, y))
        .unzip();
    if idx.is_empty() {
        return Err(Error::Domain(
            "dom f does not meet the hull of dom g, so S(f|g) is +inf everywhere".into(),
        ));
    }
    let ts: Vec<f64> = rule.nodes.iter().copied().chain([T_MIN, 2.0 * T_MIN]).collect();
    let evals: Vec<Vec<f64>> = ts
        .par_iter()
        .map(|&t| {
            let h = pencil.eval(t);
            idx.iter().zip(&fv).map(|(&i, &y)| (h[i].to_f64() - y) / t).collect()
        })
        .collect();
    let m = rule.len();
    let mut values = vec![Infinity; f.len()];
    for (j, &i) in idx.iter().enumerate() {
        let mut acc = 0.0;
        for k in 0..m {
            acc += rule.weights[k] * evals[k][j];
        }
        let (i1, i2) = (evals[m][j], evals[m + 1][j]);
        acc += 0.5 * T_MIN * ((2.0 * i1 - i2) + i1);
        values[i] = ExtendedReal::from_f64(acc).unwrap_or(Infinity);
    }
    GridFunctional::new(*f.spec(), values)
}

/// `T_p(f|g) = (G_p(f, g) − f)/p`, `p ∈ (0, 1]`.
pub fn grid_tsallis(f: &GridFunctional, g: &GridFunctional, p: Weight, mean_nodes: usize) -> Result<GridFunctional> {
    p.require_nonzero("the Tsallis entropy")?;
    let gp = grid_geometric(f, g, p, mean_nodes)?;
    let pv = p.value();
    gp.zip_with(f, |a, b| (a - b) / pv)
}

/// `T*_p(f|g) = ((G_p(f, g))* − f*)/p` on the grid `dual`.
pub fn grid_tsallis_conj_on(
    f: &GridFunctional,
    g: &GridFunctional,
    p: Weight,
    mean_nodes: usize,
    dual: &GridSpec,
) -> Result<GridFunctional> {
    p.require_nonzero("the conjugate Tsallis entropy")?;
    let gp = grid_geometric(f, g, p, mean_nodes)?;
    let s = dual.points();
    let gc = Hull::of(&gp).conjugate_sorted(&s);
    let fc = Hull::of(f).conjugate_sorted(&s);
    let pv = p.value();
    let values = gc.iter().zip(&fc).map(|(a, b)| Finite((a - b) / pv)).collect();
    GridFunctional::new(*dual, values)
}

/// Dual grid `[−S, S]` with `S` the largest hull slope of `f` and `g`.
pub fn pair_dual_spec(f: &GridFunctional, g: &GridFunctional) -> GridSpec {
    let a = default_dual_spec(f);
    let b = default_dual_spec(g);
    GridSpec::symmetric(a.x_max.max(b.x_max), f.len()).expect("symmetric interval is a valid grid")
}

/// `S(G|g)/(2(1 − p)) − S(G|f)/(2p)` from the two relative entropies of `G = G_p(f, g)`.
fn combine_halves(from_g: &GridFunctional, from_f: &GridFunctional, p: f64) -> Result<GridFunctional> {
    from_g.zip_with(from_f, |a, b| a / (2.0 * (1.0 - p)) - b / (2.0 * p))
}

/// `S_p(f|g)`, with `S_0(f|g) = S(f|g)` and `S_1(f|g) = −S(g|f)` by definition.
/// Negation follows `−x = 0 − x`, so `+∞` stays `+∞`.
pub fn grid_furuta(f: &GridFunctional, g: &GridFunctional, p: Weight, q: &Quadrature) -> Result<GridFunctional> {
    if p.is_zero() {
        return grid_relative_entropy(f, g, q.entropy_nodes);
    }
    if p.is_one() {
        return grid_relative_entropy(g, f, q.entropy_nodes)?.map(|_, v| -v);
    }
    let gp = grid_geometric(f, g, p, q.mean_nodes)?;
    let from_g = grid_relative_entropy(&gp, g, q.entropy_nodes)?;
    let from_f = grid_relative_entropy(&gp, f, q.entropy_nodes)?;
    combine_halves(&from_g, &from_f, p.value())
}

impl Entropy for GridFunctional {
    fn relative_entropy(&self, g: &Self, q: &Quadrature) -> Result<Self> {
        grid_relative_entropy(self, g, q.entropy_nodes)
    }

    fn tsallis(&self, g: &Self, p: Weight, q: &Quadrature) -> Result<Self> {
        grid_tsallis(self, g, p, q.mean_nodes)
    }

    fn tsallis_conj(&self, g: &Self, p: Weight, q: &Quadrature) -> Result<Self> {
        grid_tsallis_conj_on(self, g, p, q.mean_nodes, &pair_dual_spec(self, g))
    }

    fn furuta(&self, g: &Self, p: Weight, q: &Quadrature) -> Result<Self> {
        grid_furuta(self, g, p, q)
    }
}

impl Entropy for QuadraticFunctional {
    fn relative_entropy(&self, g: &Self, _q: &Quadrature) -> Result<Self> {
        Ok(QuadraticFunctional::new(relative_entropy(&self.pd()?, &g.pd()?)?))
    }

    fn tsallis(&self, g: &Self, p: Weight, _q: &Quadrature) -> Result<Self> {
        Ok(QuadraticFunctional::new(tsallis_entropy(&self.pd()?, &g.pd()?, p)?))
    }

    /// `((G_p)* − f*)/p` with exact quadratic conjugates.
    fn tsallis_conj(&self, g: &Self, p: Weight, q: &Quadrature) -> Result<Self> {
        p.require_nonzero("the conjugate Tsallis entropy")?;
        let gp = self.geometric(g, p, q.mean_nodes)?;
        let gc = quadratic_conjugate(&gp)?;
        let fc = quadratic_conjugate(self)?;
        Ok(QuadraticFunctional::new(gc.matrix().sub(fc.matrix()).scale(1.0 / p.value())))
    }

    fn furuta(&self, g: &Self, p: Weight, _q: &Quadrature) -> Result<Self> {
        let (a, b) = (self.pd()?, g.pd()?);
        let m = if p.is_zero() {
            relative_entropy(&a, &b)?
        } else if p.is_one() {
            relative_entropy(&b, &a)?.neg()
        } else {
            furuta_entropy(&a, &b, p)?
        };
        Ok(QuadraticFunctional::new(m))
    }
}

/// Everything the grid checkers need for one `(f, g, p)`.
#[derive(Clone, Debug)]
pub struct PairAnalysis {
    pub f: GridFunctional,
    pub g: GridFunctional,
    pub p: Weight,
    pub quadrature: Quadrature,
    pub slack_c: f64,
    /// `G_p(f, g)`, `H_p(f, g)`, `A_p(f, g)`.
    pub means: MeanTriple<GridFunctional>,
    /// `G_{1−p}(g, f)`, computed separately from `G_p(f, g)`.
    pub geometric_swapped: GridFunctional,
    /// `sup |G_p(n) − G_p(n/2)|` for `n` mean nodes.
    pub quadrature_error: f64,
    /// `S(G_p|g)` and `S(G_p|f)`.
    pub entropy_from_g: GridFunctional,
    pub entropy_from_f: GridFunctional,
    /// `S_p(f|g)`.
    pub furuta: GridFunctional,
    hull_f: Hull,
    hull_g: Hull,
    hull_geometric: Hull,
    hull_swapped: Hull,
}

impl PairAnalysis {
    pub fn new(f: &GridFunctional, g: &GridFunctional, p: Weight, quadrature: Quadrature, slack_c: f64) -> Result<Self> {
        p.require_interior("the pair analysis")?;
        f.same_grid(g)?;
        let pencil = HarmonicPencil::new(f, g)?;
        let geometric = grid_geometric_with(&pencil, f, p, quadrature.mean_nodes)?;
        let coarse = grid_geometric_with(&pencil, f, p, (quadrature.mean_nodes / 2).max(2))?;
        let quadrature_error = sup_deviation(geometric.values(), coarse.values()).0;
        let geometric_swapped = grid_geometric_with(&HarmonicPencil::new(g, f)?, g, p.complement(), quadrature.mean_nodes)?;
        let harmonic = pencil.eval_functional(p.value());
        let arithmetic = grid_arithmetic(f, g, p)?;
        let entropy_from_g = grid_relative_entropy(&geometric, g, quadrature.entropy_nodes)?;
        let entropy_from_f = grid_relative_entropy(&geometric, f, quadrature.entropy_nodes)?;
        let furuta = combine_halves(&entropy_from_g, &entropy_from_f, p.value())?;
        Ok(PairAnalysis {
            hull_f: Hull::of(f),
            hull_g: Hull::of(g),
            hull_geometric: Hull::of(&geometric),
            hull_swapped: Hull::of(&geometric_swapped),
            f: f.clone(),
            g: g.clone(),
            p,
            quadrature,
            slack_c,
            means: MeanTriple {
                harmonic,
                geometric,
                arithmetic,
            },
            geometric_swapped,
            quadrature_error,
            entropy_from_g,
            entropy_from_f,
            furuta,
        })
    }

    pub fn geometric(&self) -> &GridFunctional {
        &self.means.geometric
    }

    /// `C·(h + quadrature error)`.
    pub fn slack(&self) -> f64 {
        self.slack_c * (self.f.step() + self.quadrature_error)
    }

    fn instance(&self, index: Option<usize>) -> Instance {
        Instance {
            grid: Some(*self.f.spec()),
            p: Some(self.p.value()),
            index,
            ..Instance::default()
        }
    }

    fn witness(&self) -> Witness {
        Witness::grids(&self.f, Some(&self.g))
            .with_p(self.p)
            .with_nodes(self.quadrature.mean_nodes)
            .with_entropy_nodes(self.quadrature.entropy_nodes)
            .with_slack_c(self.slack_c)
    }

    fn base_metrics(&self, rec: VerificationRecord) -> VerificationRecord {
        rec.with_metric("slack", self.slack())
            .with_metric("quadrature_error", self.quadrature_error)
    }

    /// `H_p ≤ G_p ≤ A_p` with the discretization slack.
    pub fn check_eq25(&self) -> Result<VerificationRecord> {
        Ok(self.base_metrics(
            eq25_record(&self.means, self.instance(None), self.slack())?.with_witness(self.witness()),
        ))
    }

    /// `T*_p(f|g)(s)`.
    fn tsallis_conj_at(&self, s: f64) -> f64 {
        (self.hull_geometric.conjugate(s) - self.hull_f.conjugate(s)) / self.p.value()
    }

    /// `T*_{1−p}(g|f)(s)`.
    fn tsallis_conj_swapped_at(&self, s: f64) -> f64 {
        (self.hull_swapped.conjugate(s) - self.hull_g.conjugate(s)) / (1.0 - self.p.value())
    }

    /// At every dual point `s`:
    /// `T*_{1−p}(g|f)(s) = ((G_p(f, g))*(s) − g*(s))/(1 − p)` and
    /// `((A_p)*(s) − f*(s))/p ≤ T*_p(f|g)(s) ≤ g*(s) − f*(s)`.
    /// Grid conjugates are finite everywhere, so the right inequality applies
    /// at every dual point.
    pub fn check_prop31(&self, dual: &[f64]) -> Result<VerificationRecord> {
        let pv = self.p.value();
        let hull_a = Hull::of(&self.means.arithmetic);
        let (mut identity, mut lower, mut upper) = (0.0f64, f64::INFINITY, f64::INFINITY);
        for &s in dual {
            let (fc, gc, gpc) = (
                self.hull_f.conjugate(s),
                self.hull_g.conjugate(s),
                self.hull_geometric.conjugate(s),
            );
            let t = (gpc - fc) / pv;
            identity = identity.max((self.tsallis_conj_swapped_at(s) - (gpc - gc) / (1.0 - pv)).abs());
            lower = lower.min(t - (hull_a.conjugate(s) - fc) / pv);
            upper = upper.min((gc - fc) - t);
        }
        let slack = self.slack();
        let margins = if dual.is_empty() {
            Vec::new()
        } else {
            vec![
                Margin::deviation("swapped_identity", identity, slack),
                Margin::new("tsallis_conj_minus_lower", lower, slack),
                Margin::new("upper_minus_tsallis_conj", upper, slack),
            ]
        };
        Ok(self.base_metrics(
            VerificationRecord::new(checks::PROP31, self.instance(None), margins)
                .with_witness(self.witness())
                .with_metric("dual_points", dual.len() as f64),
        ))
    }

    /// The parametric entropy sandwich at `x_i ∈ int dom G_p(f, g)`:
    /// `½(sup_{∂G_p(x)} T*_{1−p}(g|f) + T_p(f|g)(x)) ≤ S_p(f|g)(x)
    ///   ≤ ½(−T_{1−p}(g|f)(x) − sup_{∂G_p(x)} T*_p(f|g))`,
    /// each supremum taken over `k` samples of the subdifferential interval.
    pub fn check_theorem41(&self, i: usize, k: usize) -> Result<VerificationRecord> {
        let gp = self.geometric();
        if i >= gp.len() || !gp.is_interior(i) {
            return Err(Error::Precondition(format!(
                "index {i} is not interior to dom G_p(f, g)"
            )));
        }
        let sub = subdifferential_with(gp, &self.hull_geometric, i);
        if sub.empty {
            return Err(Error::NotConvex {
                index: i,
                excess: f64::NAN,
            });
        }
        let samples = sub.samples(k);
        let (sup_swapped, arg_swapped) =
            sampled_sup(&samples, |s| self.tsallis_conj_swapped_at(s)).expect("nonempty samples");
        let (sup_direct, arg_direct) = sampled_sup(&samples, |s| self.tsallis_conj_at(s)).expect("nonempty samples");

        let pv = self.p.value();
        let x = (
            self.f.value(i),
            self.g.value(i),
            gp.value(i),
            self.geometric_swapped.value(i),
            self.furuta.value(i),
        );
        let (Finite(fx), Finite(gx), Finite(gpx), Finite(gqx), Finite(spx)) = x else {
            return Ok(VerificationRecord::new(checks::THEOREM41, self.instance(Some(i)), Vec::new())
                .with_note("a term is +inf at this point; both bounds hold by convention"));
        };
        let tsallis = (gpx - fx) / pv;
        let tsallis_swapped = (gqx - gx) / (1.0 - pv);
        let lower = 0.5 * (sup_swapped + tsallis);
        let upper = 0.5 * (-tsallis_swapped - sup_direct);
        let slack = self.slack();
        let rec = VerificationRecord::new(
            checks::THEOREM41,
            self.instance(Some(i)),
            vec![
                Margin::new("entropy_minus_lower", spx - lower, slack),
                Margin::new("upper_minus_entropy", upper - spx, slack),
            ],
        )
        .with_witness(self.witness().with_index(i).with_samples(k))
        .with_metric("lower", lower)
        .with_metric("entropy", spx)
        .with_metric("upper", upper)
        .with_metric("subdifferential_lo", sub.lo)
        .with_metric("subdifferential_hi", sub.hi)
        .with_metric("argmax_lower", arg_swapped)
        .with_metric("argmax_upper", arg_direct);
        Ok(self.base_metrics(rec).with_note(format!(
            "suprema over the subdifferential use {} of its points",
            samples.len()
        )))
    }

    /// `S_p(f|g) = −S_{1−p}(g|f)`, only for functionals finite at every grid point.
    /// Tolerance is twice the discretization slack.
    pub fn check_prop41(&self) -> Result<VerificationRecord> {
        if !(self.f.is_everywhere_finite() && self.g.is_everywhere_finite()) {
            return Err(Error::Precondition(
                "skew symmetry of S_p needs f and g finite at every grid point".into(),
            ));
        }
        let q = self.p.complement();
        let swapped_from_f = grid_relative_entropy(&self.geometric_swapped, &self.f, self.quadrature.entropy_nodes)?;
        let swapped_from_g = grid_relative_entropy(&self.geometric_swapped, &self.g, self.quadrature.entropy_nodes)?;
        // S_{1−p}(g|f) = S(G|f)/(2p) − S(G|g)/(2(1 − p)) with G = G_{1−p}(g, f)
        let swapped = combine_halves(&swapped_from_f, &swapped_from_g, q.value())?;
        let negated = swapped.map(|_, v| -v)?;
        let (dev, mismatched) = sup_deviation(self.furuta.values(), negated.values());
        let tol = 2.0 * self.slack();
        let mut margins = vec![Margin::deviation("skew", dev, tol)];
        if mismatched > 0 {
            margins.push(Margin::deviation("skew_domain_mismatch", mismatched as f64, 0.0));
        }
        Ok(self.base_metrics(
            VerificationRecord::new(checks::PROP41, self.instance(None), margins).with_witness(self.witness()),
        ))
    }

    /// Compares the two halves `S(G|g)/(1 − p)` and `−S(G|f)/p` whose average
    /// defines `S_p`. Reported only: they agree for quadratics, and nothing
    /// forces them to agree in general.
    pub fn furuta_halves(&self) -> Result<VerificationRecord> {
        let pv = self.p.value();
        let from_g = self.entropy_from_g.map(|_, v| v / (1.0 - pv))?;
        let from_f = self.entropy_from_f.map(|_, v| -v / pv)?;
        let (gap, mismatched) = sup_deviation(from_g.values(), from_f.values());
        Ok(VerificationRecord::new(checks::FURUTA_HALVES, self.instance(None), Vec::new())
            .with_witness(self.witness())
            .with_metric("max_gap", gap)
            .with_metric("domain_mismatch", mismatched as f64)
            .with_metric("scale", self.furuta.sup_abs()))
    }
}

/// `S(f|g)` together with the data for its two-sided bound
/// `sup_{∂f(x)} (f* − g*) ≤ S(f|g)(x) ≤ (g − f)(x)`.
#[derive(Clone, Debug)]
pub struct EntropySandwich {
    pub f: GridFunctional,
    pub g: GridFunctional,
    pub entropy: GridFunctional,
    pub slack: f64,
    entropy_nodes: usize,
    hull_f: Hull,
    hull_g: Hull,
}

impl EntropySandwich {
    pub fn new(f: &GridFunctional, g: &GridFunctional, entropy_nodes: usize, slack: f64) -> Result<Self> {
        Ok(EntropySandwich {
            entropy: grid_relative_entropy(f, g, entropy_nodes)?,
            f: f.clone(),
            g: g.clone(),
            slack,
            entropy_nodes,
            hull_f: Hull::of(f),
            hull_g: Hull::of(g),
        })
    }

    pub fn check(&self, i: usize, k: usize) -> Result<VerificationRecord> {
        if i >= self.f.len() || !self.f.is_interior(i) {
            return Err(Error::Precondition(format!("index {i} is not interior to dom f")));
        }
        let sub = subdifferential_with(&self.f, &self.hull_f, i);
        if sub.empty {
            return Err(Error::NotConvex {
                index: i,
                excess: f64::NAN,
            });
        }
        let samples = sub.samples(k);
        let (lower, arg) = sampled_sup(&samples, |s| self.hull_f.conjugate(s) - self.hull_g.conjugate(s))
            .expect("nonempty samples");
        let instance = Instance {
            grid: Some(*self.f.spec()),
            index: Some(i),
            ..Instance::default()
        };
        let witness = Witness::grids(&self.f, Some(&self.g))
            .with_index(i)
            .with_samples(k)
            .with_entropy_nodes(self.entropy_nodes)
            .with_tol(self.slack);
        let mut margins = Vec::new();
        let mut rec_notes = Vec::new();
        match self.entropy.value(i) {
            Finite(s) => {
                margins.push(Margin::new("entropy_minus_lower", s - lower, self.slack));
                match self.g.value(i) - self.f.value(i) {
                    Finite(upper) => margins.push(Margin::new("upper_minus_entropy", upper - s, self.slack)),
                    Infinity => rec_notes.push("g = +inf here; the upper bound holds by convention"),
                }
            }
            Infinity => rec_notes.push("S(f|g) = +inf here (x outside the hull of dom g); both bounds hold"),
        }
        let mut rec = VerificationRecord::new(checks::THEOREM31, instance, margins)
            .with_witness(witness)
            .with_metric("lower", lower)
            .with_metric("argmax_lower", arg)
            .with_metric("entropy", self.entropy.value(i).finite().unwrap_or(f64::MAX));
        for n in rec_notes {
            rec = rec.with_note(n);
        }
        Ok(rec)
    }
}

/// Two-sided bound on `S(f|g)(x_i)` for convex `f` at an interior point.
pub fn check_theorem31(
    f: &GridFunctional,
    g: &GridFunctional,
    i: usize,
    entropy_nodes: usize,
    slack: f64,
) -> Result<VerificationRecord> {
    if i >= f.len() || !f.is_interior(i) {
        return Err(Error::Precondition(format!("index {i} is not interior to dom f")));
    }
    EntropySandwich::new(f, g, entropy_nodes, slack)?.check(i, SUBDIFF_SAMPLES)
}

/// Quadratic specialization of the parametric entropy sandwich: `∂G_p(x)` is
/// the singleton `(A ♯_p B) x`, and each bound is again a quadratic form.
/// The margins must coincide with those of the operator sandwich.
pub fn check_corollary41(
    fa: &QuadraticFunctional,
    fb: &QuadraticFunctional,
    p: Weight,
    tol: f64,
) -> Result<VerificationRecord> {
    p.require_interior("the quadratic entropy sandwich")?;
    let q = p.complement();
    let quad = Quadrature::default();
    let (a, b) = (fa.pd()?, fb.pd()?);
    let gradient = geometric_mean(&a, &b, p)?;
    // x ↦ T*(G x) is the quadratic form of G T* G
    let conj_swapped = fb.tsallis_conj(fa, q, &quad)?;
    let conj_direct = fa.tsallis_conj(fb, p, &quad)?;
    let lower = congruence(gradient.matrix(), conj_swapped.matrix())?
        .add(fa.tsallis(fb, p, &quad)?.matrix())
        .scale(0.5);
    let upper = fb
        .tsallis(fa, q, &quad)?
        .matrix()
        .neg()
        .sub(&congruence(gradient.matrix(), conj_direct.matrix())?)
        .scale(0.5);
    let middle = fa.furuta(fb, p, &quad)?;
    let lo = loewner_leq(&lower, middle.matrix(), tol)?;
    let hi = loewner_leq(middle.matrix(), &upper, tol)?;

    let reference = corollary42_sandwich(&a, &b, p)?;
    let lo_ref = loewner_leq(&reference.lower, &reference.middle, tol)?;
    let hi_ref = loewner_leq(&reference.middle, &reference.upper, tol)?;
    let agree = |x: f64, y: f64| (x - y).abs() / (1.0 + y.abs());
    Ok(VerificationRecord::new(
        checks::COROLLARY41,
        Instance {
            dim: Some(a.dim()),
            p: Some(p.value()),
            ..Instance::default()
        },
        vec![
            Margin::new("entropy_minus_lower", lo.margin, tol * lo.scale),
            Margin::new("upper_minus_entropy", hi.margin, tol * hi.scale),
            Margin::deviation("lower_agreement", agree(lo.margin, lo_ref.margin), 1e-9),
            Margin::deviation("upper_agreement", agree(hi.margin, hi_ref.margin), 1e-9),
        ],
    )
    .with_witness(Witness::matrices(&a, &b, None).with_p(p).with_tol(tol)))
}

/// Quadratic means and entropies computed from their functional definitions,
/// with exact quadratic conjugates and quadrature in `t`.
pub mod definition_route {
    use super::*;

    /// `H_t(f_A, f_B) = ((1 − t) f_A* + t f_B*)*`.
    pub fn harmonic(a: &PDMatrix, b: &PDMatrix, t: f64) -> Result<PDMatrix> {
        let ac = quadratic_conjugate(&QuadraticFunctional::from_pd(a))?;
        let bc = quadratic_conjugate(&QuadraticFunctional::from_pd(b))?;
        let mix = QuadraticFunctional::new(ac.matrix().lin_comb(1.0 - t, bc.matrix(), t));
        quadratic_conjugate(&mix)?.pd()
    }

    pub fn geometric(a: &PDMatrix, b: &PDMatrix, p: Weight, nodes: usize) -> Result<PDMatrix> {
        let rule = GaussRule::geometric_mean_weight(p.value(), nodes)?;
        let mut acc = SymMatrix::zeros(a.dim());
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            acc = acc.lin_comb(1.0, harmonic(a, b, t)?.as_sym(), w);
        }
        PDMatrix::new(acc)
    }

    /// `∫₀¹ (H_t − A)/t dt`, composite Gauss–Legendre on `(0, 1)`.
    pub fn relative_entropy(a: &PDMatrix, b: &PDMatrix, nodes: usize) -> Result<SymMatrix> {
        let panels = (nodes / PANEL_NODES).max(1);
        let rule = GaussRule::composite_legendre(0.0, 1.0, panels, nodes.div_ceil(panels))?;
        let mut acc = SymMatrix::zeros(a.dim());
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let d = harmonic(a, b, t)?.as_sym().sub(a.as_sym());
            acc = acc.lin_comb(1.0, &d, w / t);
        }
        Ok(acc)
    }
}

/// The quadratic backend against the functional definitions: `H_p`, `G_p`,
/// `S`, `T_p`, `T*_p` (whose quadratic form is `T_p(A⁻¹|B⁻¹)`) and `S_p`,
/// each as a relative Frobenius deviation.
pub fn check_extension_principle(
    a: &PDMatrix,
    b: &PDMatrix,
    p: Weight,
    nodes: usize,
    tol: f64,
) -> Result<VerificationRecord> {
    p.require_interior("the extension principle check")?;
    let pv = p.value();
    let dev = |x: &SymMatrix, y: &SymMatrix| x.sub(y).frobenius_norm() / (1.0 + y.frobenius_norm());

    let h_def = definition_route::harmonic(a, b, pv)?;
    let g_def = definition_route::geometric(a, b, p, nodes)?;
    let s_def = definition_route::relative_entropy(a, b, nodes)?;
    let t_def = g_def.as_sym().sub(a.as_sym()).scale(1.0 / pv);
    let tc_def = g_def.inverse().as_sym().sub(a.inverse().as_sym()).scale(1.0 / pv);
    let sp_def = definition_route::relative_entropy(&g_def, b, nodes)?
        .scale(1.0 / (2.0 * (1.0 - pv)))
        .sub(&definition_route::relative_entropy(&g_def, a, nodes)?.scale(1.0 / (2.0 * pv)));

    let margins = vec![
        Margin::deviation("harmonic", dev(h_def.as_sym(), harmonic_mean(a, b, p)?.as_sym()), tol),
        Margin::deviation("geometric", dev(g_def.as_sym(), geometric_mean(a, b, p)?.as_sym()), tol),
        Margin::deviation("relative_entropy", dev(&s_def, &relative_entropy(a, b)?), tol),
        Margin::deviation("tsallis", dev(&t_def, &tsallis_entropy(a, b, p)?), tol),
        Margin::deviation(
            "tsallis_conj",
            dev(&tc_def, &tsallis_entropy(&a.inverse(), &b.inverse(), p)?),
            tol,
        ),
        Margin::deviation("furuta", dev(&sp_def, &furuta_entropy(a, b, p)?), tol),
    ];
    Ok(VerificationRecord::new(
        checks::EXTENSION_PRINCIPLE,
        Instance {
            dim: Some(a.dim()),
            p: Some(pv),
            ..Instance::default()
        },
        margins,
    )
    .with_witness(Witness::matrices(a, b, None).with_p(p).with_tol(tol).with_nodes(nodes)))
}

/// At `p = ½` the parametric entropy equals the unhalved difference
/// `S(G|g) − S(G|f)`, `G = G_{1/2}(f, g)`.
pub fn check_furuta_half_weight(
    f: &GridFunctional,
    g: &GridFunctional,
    q: &Quadrature,
    tol: f64,
) -> Result<VerificationRecord> {
    let sp = grid_furuta(f, g, Weight::HALF, q)?;
    let mid = grid_geometric(f, g, Weight::HALF, q.mean_nodes)?;
    let diff = grid_relative_entropy(&mid, g, q.entropy_nodes)?
        .zip_with(&grid_relative_entropy(&mid, f, q.entropy_nodes)?, |a, b| a - b)?;
    let (dev, mismatched) = sup_deviation(sp.values(), diff.values());
    let mut margins = vec![Margin::deviation("difference_form", dev, tol)];
    if mismatched > 0 {
        margins.push(Margin::deviation("domain_mismatch", mismatched as f64, 0.0));
    }
    Ok(VerificationRecord::new(
        checks::FURUTA_HALF_WEIGHT,
        Instance {
            grid: Some(*f.spec()),
            p: Some(0.5),
            ..Instance::default()
        },
        margins,
    )
    .with_witness(Witness::grids(f, Some(g)).with_tol(tol)))
}
