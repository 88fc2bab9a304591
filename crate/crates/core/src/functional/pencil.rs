//! The harmonic path `t ↦ H_t(f, g) = ((1 − t) f* + t g*)*` of two grid
//! functionals, evaluated exactly.
//!
//! `f*` and `g*` are convex and piecewise linear with breakpoints at the hull
//! slopes of `f` and `g`, and linear beyond them with slopes equal to the ends
//! of the hull domains. Hence `φ_t = (1 − t) f* + t g*` is piecewise linear on
//! the merged breakpoint set `U`, and for `x` in
//! `(1 − t)[L_f, R_f] + t[L_g, R_g]` the supremum defining `φ_t*(x)` is attained
//! on `U`. Both conjugates are tabulated on `U` once; every `t` then costs one
//! hull sweep.

use super::conjugate::Hull;
use super::extended::{ExtendedReal, Finite, Infinity};
use super::grid::GridFunctional;
use crate::error::Result;

/// Relative tolerance, in units of the grid step, for the domain endpoints of `H_t`.
const DOMAIN_TOL: f64 = 1e-9;
/// Breakpoints closer than this, relative to the largest one, are merged.
/// Slopes of `f` and `g` that agree up to rounding would otherwise produce
/// near-zero spacings and a meaningless hull of `φ_t`.
const MERGE_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct HarmonicPencil {
    f: GridFunctional,
    breakpoints: Vec<f64>,
    f_conj: Vec<f64>,
    g_conj: Vec<f64>,
    dom_f: (f64, f64),
    dom_g: (f64, f64),
}

impl HarmonicPencil {
    pub fn new(f: &GridFunctional, g: &GridFunctional) -> Result<Self> {
        f.same_grid(g)?;
        let hf = Hull::of(f);
        let hg = Hull::of(g);
        let mut u: Vec<f64> = hf.slopes().iter().chain(hg.slopes()).copied().chain([0.0]).collect();
        u.sort_by(f64::total_cmp);
        let scale = u.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        u.dedup_by(|b, a| *b - *a <= MERGE_TOL * scale);
        let f_conj = hf.conjugate_sorted(&u);
        let g_conj = hg.conjugate_sorted(&u);
        Ok(HarmonicPencil {
            f: f.clone(),
            breakpoints: u,
            f_conj,
            g_conj,
            dom_f: (hf.left(), hf.right()),
            dom_g: (hg.left(), hg.right()),
        })
    }

    /// Ends of the hull of `dom f`.
    pub fn dom_f(&self) -> (f64, f64) {
        self.dom_f
    }

    /// Ends of the hull of `dom g`.
    pub fn dom_g(&self) -> (f64, f64) {
        self.dom_g
    }

    /// Interval on which `H_t` is finite.
    pub fn domain(&self, t: f64) -> (f64, f64) {
        (
            (1.0 - t) * self.dom_f.0 + t * self.dom_g.0,
            (1.0 - t) * self.dom_f.1 + t * self.dom_g.1,
        )
    }

    /// `[max(L_f, L_g), min(R_f, R_g)]`, the part of the grid on which every
    /// `H_t`, `t ∈ [0, 1]`, is finite. `None` when empty.
    pub fn common_domain(&self) -> Option<(f64, f64)> {
        let lo = self.dom_f.0.max(self.dom_g.0);
        let hi = self.dom_f.1.min(self.dom_g.1);
        (lo <= hi).then_some((lo, hi))
    }

    pub(crate) fn tolerance(&self) -> f64 {
        DOMAIN_TOL * self.f.step()
    }

    /// Whether grid point `x` lies in the interval `(lo, hi)` up to the domain tolerance.
    pub(crate) fn inside(&self, x: f64, (lo, hi): (f64, f64)) -> bool {
        let tol = self.tolerance();
        x >= lo - tol && x <= hi + tol
    }

    /// `H_t(f, g)` at every grid point.
    pub fn eval(&self, t: f64) -> Vec<ExtendedReal> {
        let phi: Vec<f64> = self
            .f_conj
            .iter()
            .zip(&self.g_conj)
            .map(|(&a, &b)| (1.0 - t) * a + t * b)
            .collect();
        let hull = Hull::from_points(&self.breakpoints, &phi);
        let dom = self.domain(t);
        let xs = self.f.spec().points();
        let inside: Vec<usize> = (0..xs.len()).filter(|&i| self.inside(xs[i], dom)).collect();
        let query: Vec<f64> = inside.iter().map(|&i| xs[i]).collect();
        let vals = hull.conjugate_sorted(&query);
        let mut out = vec![Infinity; xs.len()];
        for (&i, v) in inside.iter().zip(vals) {
            out[i] = Finite(v);
        }
        out
    }

    pub fn eval_functional(&self, t: f64) -> GridFunctional {
        GridFunctional::new(*self.f.spec(), self.eval(t)).expect("H_t is finite on a nonempty interval")
    }
}
