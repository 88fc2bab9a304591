//! Fenchel conjugation of grid functionals, biconjugates, subdifferentials and
//! the Fenchel–Young gap.
//!
//! The conjugate `f*(s) = sup_i { s·x_i − f(x_i) }` only sees the lower convex
//! hull of the finite samples, so everything here goes through [`Hull`]:
//! `f*` is evaluated exactly at any `s`, and `f**` is the hull itself.

use super::extended::{Finite, Infinity};
use super::grid::{GridFunctional, GridSpec};
use crate::error::{Error, Result};
use crate::record::{checks, Instance, Margin, VerificationRecord, Witness};

/// Relative tolerance for deciding that a sample lies on its convex hull.
pub const HULL_TOL: f64 = 1e-12;

/// Lower convex hull of a finite point set with strictly increasing abscissae.
#[derive(Clone, Debug, PartialEq)]
pub struct Hull {
    /// Positions of the vertices in the input sequence.
    indices: Vec<usize>,
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// `slopes[k]` joins vertices `k` and `k + 1`; nondecreasing.
    slopes: Vec<f64>,
}

impl Hull {
    /// Andrew's monotone chain on points sorted by `x`; collinear points are
    /// dropped. Panics if `xs` is empty.
    pub fn from_points(xs: &[f64], ys: &[f64]) -> Hull {
        assert!(!xs.is_empty() && xs.len() == ys.len());
        let mut st: Vec<usize> = Vec::with_capacity(xs.len());
        for j in 0..xs.len() {
            while st.len() >= 2 {
                let (o, a) = (st[st.len() - 2], st[st.len() - 1]);
                let cross = (xs[a] - xs[o]) * (ys[j] - ys[o]) - (ys[a] - ys[o]) * (xs[j] - xs[o]);
                if cross <= 0.0 {
                    st.pop();
                } else {
                    break;
                }
            }
            st.push(j);
        }
        let hx: Vec<f64> = st.iter().map(|&j| xs[j]).collect();
        let hy: Vec<f64> = st.iter().map(|&j| ys[j]).collect();
        let slopes = (1..hx.len()).map(|k| (hy[k] - hy[k - 1]) / (hx[k] - hx[k - 1])).collect();
        Hull {
            indices: st,
            xs: hx,
            ys: hy,
            slopes,
        }
    }

    /// Hull of the finite samples; `indices` refer to grid indices.
    pub fn of(f: &GridFunctional) -> Hull {
        let (mut gi, mut xs, mut ys) = (Vec::new(), Vec::new(), Vec::new());
        for (i, x, y) in f.finite_points() {
            gi.push(i);
            xs.push(x);
            ys.push(y);
        }
        let mut hull = Hull::from_points(&xs, &ys);
        for k in hull.indices.iter_mut() {
            *k = gi[*k];
        }
        hull
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn left(&self) -> f64 {
        self.xs[0]
    }

    pub fn right(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn max_abs_slope(&self) -> f64 {
        self.slopes.iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    fn score(&self, k: usize, s: f64) -> f64 {
        s * self.xs[k] - self.ys[k]
    }

    /// `f*(s)`, exact: the maximizing vertex is located by bisection on the
    /// slopes and confirmed against its neighbours.
    pub fn conjugate(&self, s: f64) -> f64 {
        let k = self.slopes.partition_point(|&m| m < s);
        let lo = k.saturating_sub(1);
        let hi = (k + 1).min(self.xs.len() - 1);
        (lo..=hi).map(|j| self.score(j, s)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `f*` at ascending dual points by a single march along the hull.
    pub fn conjugate_sorted(&self, ss: &[f64]) -> Vec<f64> {
        let mut k = 0;
        let last = self.xs.len() - 1;
        ss.iter()
            .map(|&s| {
                while k < last && self.score(k + 1, s) >= self.score(k, s) {
                    k += 1;
                }
                // a non-ascending query may need to step back
                while k > 0 && self.score(k - 1, s) > self.score(k, s) {
                    k -= 1;
                }
                self.score(k, s)
            })
            .collect()
    }

    /// Hull segment containing `x`: `Ok(k)` if `x` is vertex `k`, `Err(k)` if it
    /// lies strictly between vertices `k` and `k + 1`; `None` outside.
    fn locate(&self, x: f64) -> Option<std::result::Result<usize, usize>> {
        if x < self.left() || x > self.right() {
            return None;
        }
        match self.xs.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(k) => Some(Ok(k)),
            Err(k) => Some(Err(k - 1)),
        }
    }

    /// The hull (the biconjugate) at `x`; `None` outside `[left, right]`.
    pub fn value_at(&self, x: f64) -> Option<f64> {
        Some(match self.locate(x)? {
            Ok(k) => self.ys[k],
            Err(k) => {
                let (x0, x1) = (self.xs[k], self.xs[k + 1]);
                ((x1 - x) * self.ys[k] + (x - x0) * self.ys[k + 1]) / (x1 - x0)
            }
        })
    }
}

/// Dual grid `[−S, S]` with `S` the largest hull slope magnitude (`[−1, 1]`
/// when the hull is a single point or flat) and as many points as `f`.
pub fn default_dual_spec(f: &GridFunctional) -> GridSpec {
    let s = Hull::of(f).max_abs_slope();
    let s = if s > 0.0 { s } else { 1.0 };
    GridSpec::symmetric(s, f.len()).expect("a symmetric interval with n >= 2 is a valid grid")
}

/// `f*` on `dual` by maximizing over every finite sample.
pub fn conjugate_bruteforce(f: &GridFunctional, dual: &GridSpec) -> GridFunctional {
    let pts: Vec<(f64, f64)> = f.finite_points().map(|(_, x, y)| (x, y)).collect();
    let values = dual
        .points()
        .into_iter()
        .map(|s| {
            let best = pts.iter().map(|&(x, y)| s * x - y).fold(f64::NEG_INFINITY, f64::max);
            Finite(best)
        })
        .collect();
    GridFunctional::new(*dual, values).expect("conjugate of a proper grid functional is finite")
}

/// `f*` on `dual` in `O(n + m)` via the convex hull.
pub fn conjugate_fast(f: &GridFunctional, dual: &GridSpec) -> GridFunctional {
    let values = Hull::of(f)
        .conjugate_sorted(&dual.points())
        .into_iter()
        .map(Finite)
        .collect();
    GridFunctional::new(*dual, values).expect("conjugate of a proper grid functional is finite")
}

/// `f*(s)` at a single dual point.
pub fn conjugate_at(f: &GridFunctional, s: f64) -> f64 {
    Hull::of(f).conjugate(s)
}

/// `f**` on the grid of `f`: the lower convex envelope of the samples,
/// `+∞` outside the hull of the effective domain.
pub fn biconjugate(f: &GridFunctional) -> GridFunctional {
    biconjugate_with(f, &Hull::of(f))
}

fn biconjugate_with(f: &GridFunctional, hull: &Hull) -> GridFunctional {
    let (lo, hi) = (hull.indices[0], hull.indices[hull.indices.len() - 1]);
    let mut values = vec![Infinity; f.len()];
    let mut k = 0;
    for (i, v) in values.iter_mut().enumerate().take(hi + 1).skip(lo) {
        while k + 1 < hull.indices.len() && hull.indices[k + 1] <= i {
            k += 1;
        }
        *v = Finite(if hull.indices[k] == i {
            hull.ys[k]
        } else {
            let (x0, x1, x) = (hull.xs[k], hull.xs[k + 1], f.x(i));
            ((x1 - x) * hull.ys[k] + (x - x0) * hull.ys[k + 1]) / (x1 - x0)
        });
    }
    GridFunctional::new(*f.spec(), values).expect("the hull has at least one finite point")
}

/// First grid index where `f` exceeds its convex envelope by more than
/// `tol·(1 + |f|)`, with the excess.
pub fn convexity_defect(f: &GridFunctional, tol: f64) -> Option<(usize, f64)> {
    let env = biconjugate(f);
    f.finite_points().find_map(|(i, _, y)| {
        let e = env.value(i).finite().expect("envelope is finite on dom f");
        let excess = y - e;
        (excess > tol * (1.0 + y.abs())).then_some((i, excess))
    })
}

pub fn is_convex(f: &GridFunctional) -> bool {
    convexity_defect(f, 1e-9).is_none()
}

pub(crate) fn require_convex(f: &GridFunctional) -> Result<()> {
    match convexity_defect(f, 1e-9) {
        None => Ok(()),
        Some((index, excess)) => Err(Error::NotConvex { index, excess }),
    }
}

/// `∂f(x)` in one dimension: a closed interval or empty.
#[derive(Clone, Debug, PartialEq)]
pub struct SubdifferentialInterval {
    pub lo: f64,
    pub hi: f64,
    pub empty: bool,
    pub warning: Option<String>,
}

impl SubdifferentialInterval {
    pub fn interval(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        SubdifferentialInterval {
            lo,
            hi,
            empty: false,
            warning: None,
        }
    }

    pub fn singleton(s: f64) -> Self {
        SubdifferentialInterval::interval(s, s)
    }

    pub fn empty(warning: impl Into<String>) -> Self {
        SubdifferentialInterval {
            lo: f64::NAN,
            hi: f64::NAN,
            empty: true,
            warning: Some(warning.into()),
        }
    }

    pub fn width(&self) -> f64 {
        if self.empty {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    pub fn contains(&self, s: f64, tol: f64) -> bool {
        !self.empty && s >= self.lo - tol && s <= self.hi + tol
    }

    /// `k` equally spaced points including both endpoints (one point for a
    /// singleton, none when empty).
    pub fn samples(&self, k: usize) -> Vec<f64> {
        if self.empty || k == 0 {
            return Vec::new();
        }
        if self.lo == self.hi || k == 1 {
            return vec![self.lo];
        }
        (0..k)
            .map(|j| {
                if j + 1 == k {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * j as f64 / (k - 1) as f64
                }
            })
            .collect()
    }
}

/// `∂f(x_i)` of the grid functional: `[left slope, right slope]` at a hull
/// vertex, the segment slope inside a hull segment, empty where `f` lies above
/// its hull. Non-interior indices yield an empty interval with a warning.
pub fn subdifferential(f: &GridFunctional, i: usize) -> SubdifferentialInterval {
    subdifferential_with(f, &Hull::of(f), i)
}

pub(crate) fn subdifferential_with(f: &GridFunctional, hull: &Hull, i: usize) -> SubdifferentialInterval {
    if i >= f.len() || !f.is_interior(i) {
        return SubdifferentialInterval::empty(format!("index {i} is not interior to the effective domain"));
    }
    let y = f.value(i).finite().expect("interior points are finite");
    match hull.indices.binary_search(&i) {
        Ok(k) => SubdifferentialInterval::interval(hull.slopes[k - 1], hull.slopes[k]),
        Err(k) => {
            let seg = k - 1;
            let env = hull.value_at(f.x(i)).expect("interior point lies inside the hull");
            if y - env <= HULL_TOL * (1.0 + y.abs()) {
                SubdifferentialInterval::singleton(hull.slopes[seg])
            } else {
                SubdifferentialInterval::empty(format!(
                    "f lies above its convex envelope at index {i} (excess {:e})",
                    y - env
                ))
            }
        }
    }
}

/// Fenchel–Young gap `f(x_i) + f*(s) − s·x_i ≥ 0`, with equality up to
/// `h·(1 + |s|)` expected when `s ∈ ∂f(x_i)`.
pub fn fenchel_young_check(f: &GridFunctional, i: usize, s: f64) -> Result<VerificationRecord> {
    if i >= f.len() || !f.is_interior(i) {
        return Err(Error::Precondition(format!("index {i} is not interior to dom f")));
    }
    let hull = Hull::of(f);
    let x = f.x(i);
    let y = f.value(i).finite().expect("interior points are finite");
    let gap = y + hull.conjugate(s) - s * x;
    let sub = subdifferential_with(f, &hull, i);
    let mut margins = vec![Margin::new("gap", gap, 1e-12)];
    let inside = sub.contains(s, 0.0);
    if inside {
        margins.push(Margin::deviation("gap_at_subgradient", gap, f.step() * (1.0 + s.abs())));
    }
    let rec = VerificationRecord::new(
        checks::FENCHEL_YOUNG,
        Instance {
            grid: Some(*f.spec()),
            index: Some(i),
            ..Instance::default()
        },
        margins,
    )
    .with_witness(Witness::grids(f, None).with_index(i).with_dual_point(s));
    Ok(if inside {
        rec
    } else {
        rec.with_note(format!("s = {s} is outside the subdifferential; gap = {gap:e}"))
    })
}

/// `conjugate_fast` against `conjugate_bruteforce` on the default dual grid.
pub fn check_conjugate_equivalence(f: &GridFunctional, tol: f64) -> VerificationRecord {
    let dual = default_dual_spec(f);
    let (dev, _) = super::grid::sup_deviation(conjugate_fast(f, &dual).values(), conjugate_bruteforce(f, &dual).values());
    VerificationRecord::new(
        checks::CONJUGATE_EQUIVALENCE,
        Instance {
            grid: Some(*f.spec()),
            ..Instance::default()
        },
        vec![Margin::deviation("fast_vs_bruteforce", dev, tol)],
    )
    .with_witness(Witness::grids(f, None).with_tol(tol))
}

/// `f** ≤ f` on `dom f`, and `f** = f` when `f` is known to be convex.
pub fn check_biconjugate(f: &GridFunctional, convex: bool, tol: f64) -> VerificationRecord {
    let env = biconjugate(f);
    let mut below = f64::INFINITY;
    let mut dev = 0.0f64;
    for (i, _, y) in f.finite_points() {
        let e = env.value(i).finite().expect("envelope is finite on dom f");
        below = below.min(y - e);
        dev = dev.max((y - e).abs());
    }
    let mut margins = vec![Margin::new("f_minus_biconjugate", below, tol)];
    if convex {
        margins.push(Margin::deviation("fixed_point", dev, tol));
    }
    VerificationRecord::new(
        checks::BICONJUGATE,
        Instance {
            grid: Some(*f.spec()),
            ..Instance::default()
        },
        margins,
    )
    .with_witness(Witness::grids(f, None).with_tol(tol).with_convex(convex))
}

/// `sup_{s ∈ samples} φ(s)` together with the maximizing sample.
pub(crate) fn sampled_sup(samples: &[f64], phi: impl Fn(f64) -> f64) -> Option<(f64, f64)> {
    samples
        .iter()
        .map(|&s| (phi(s), s))
        .fold(None, |best, (v, s)| match best {
            Some((bv, _)) if bv >= v => best,
            _ => Some((v, s)),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: f64, b: f64, n: usize) -> GridSpec {
        GridSpec::new(a, b, n).unwrap()
    }

    fn half_square(n: usize) -> GridFunctional {
        GridFunctional::from_fn(spec(-10.0, 10.0, n), |x| 0.5 * x * x).unwrap()
    }

    #[test]
    fn quadratic_is_self_conjugate_up_to_sampling() {
        let f = half_square(2001);
        let dual = spec(-5.0, 5.0, 1001);
        let h = f.step();
        for g in [conjugate_bruteforce(&f, &dual), conjugate_fast(&f, &dual)] {
            for (_, s, v) in g.finite_points() {
                let err = (0.5 * s * s - v).abs();
                assert!(err <= h * h / 2.0 + 1e-12, "s = {s}: {err}");
            }
        }
    }

    #[test]
    fn point_indicator_conjugate_is_zero() {
        let s = spec(-1.0, 1.0, 5);
        let mut vals = vec![Infinity; 5];
        vals[2] = Finite(0.0);
        let f = GridFunctional::new(s, vals).unwrap();
        let g = conjugate_fast(&f, &spec(-3.0, 3.0, 7));
        assert!(g.values().iter().all(|v| *v == Finite(0.0)));
    }

    #[test]
    fn absolute_value_conjugate_on_truncated_grid() {
        let f = GridFunctional::from_fn(spec(-10.0, 10.0, 201), f64::abs).unwrap();
        let g = conjugate_bruteforce(&f, &spec(-2.0, 2.0, 41));
        for (_, s, v) in g.finite_points() {
            let want = if s.abs() <= 1.0 { 0.0 } else { (s.abs() - 1.0) * 10.0 };
            assert!((v - want).abs() < 1e-12, "s = {s}: {v} vs {want}");
        }
    }

    #[test]
    fn double_well_conjugate_and_envelope() {
        let f = GridFunctional::from_fn(spec(-2.0, 2.0, 401), |x| (x * x - 1.0).powi(2)).unwrap();
        let dual = default_dual_spec(&f);
        let fast = conjugate_fast(&f, &dual);
        let brute = conjugate_bruteforce(&f, &dual);
        let (dev, mism) = super::super::grid::sup_deviation(fast.values(), brute.values());
        assert!(dev <= 1e-12 && mism == 0);

        let env = biconjugate(&f);
        for (i, x, v) in env.finite_points() {
            if x.abs() <= 1.0 {
                assert!(v.abs() < 1e-12, "x = {x}: {v}");
            } else {
                assert!((v - f.value(i).finite().unwrap()).abs() < 1e-9);
            }
        }
        assert!(!is_convex(&f));
        assert!(is_convex(&env));
    }

    #[test]
    fn biconjugate_fixes_convex_and_minorizes() {
        let f = half_square(501);
        let env = biconjugate(&f);
        let (dev, _) = super::super::grid::sup_deviation(env.values(), f.values());
        assert!(dev <= 1e-9);
        let g = GridFunctional::from_fn(spec(-3.0, 3.0, 301), |x| (3.0 * x).sin() + 0.1 * x * x).unwrap();
        let env = biconjugate(&g);
        for i in 0..g.len() {
            assert!(env.value(i).to_f64() <= g.value(i).to_f64() + 1e-9);
        }
    }

    #[test]
    fn biconjugate_fills_domain_gaps() {
        let s = spec(0.0, 4.0, 5);
        let f = GridFunctional::new(s, vec![Finite(0.0), Infinity, Finite(2.0), Infinity, Infinity]).unwrap();
        let env = biconjugate(&f);
        assert_eq!(env.values(), &[Finite(0.0), Finite(1.0), Finite(2.0), Infinity, Infinity]);
    }

    #[test]
    fn subdifferential_examples() {
        let f = half_square(2001);
        let h = f.step();
        let i = f.spec().nearest_index(1.0).unwrap();
        let sub = subdifferential(&f, i);
        assert!((sub.lo - (1.0 - h / 2.0)).abs() < 1e-9 && (sub.hi - (1.0 + h / 2.0)).abs() < 1e-9);
        assert!(sub.contains(1.0, 0.0));

        let a = GridFunctional::from_fn(spec(-1.0, 1.0, 21), f64::abs).unwrap();
        let sub = subdifferential(&a, 10);
        assert!((sub.lo + 1.0).abs() < 1e-12 && (sub.hi - 1.0).abs() < 1e-12);

        let lin = GridFunctional::from_fn(spec(-1.0, 1.0, 21), |x| 2.0 * x).unwrap();
        for i in 1..20 {
            let sub = subdifferential(&lin, i);
            assert!((sub.lo - 2.0).abs() < 1e-12 && (sub.hi - 2.0).abs() < 1e-12);
        }

        let sub = subdifferential(&lin, 0);
        assert!(sub.empty && sub.warning.is_some());
    }

    #[test]
    fn subdifferential_empty_above_hull() {
        let f = GridFunctional::from_fn(spec(-2.0, 2.0, 41), |x| (x * x - 1.0).powi(2)).unwrap();
        assert!(subdifferential(&f, 20).empty);
    }

    #[test]
    fn fenchel_young_examples() {
        let f = half_square(2001);
        let i = f.spec().nearest_index(1.0).unwrap();
        let rec = fenchel_young_check(&f, i, 1.0).unwrap();
        assert!(rec.pass && rec.margins[0].value.abs() <= f.step());
        let rec = fenchel_young_check(&f, i, 3.0).unwrap();
        assert!((rec.margins[0].value - 2.0).abs() < 1e-9);
        assert_eq!(rec.margins.len(), 1);

        let a = GridFunctional::from_fn(spec(-1.0, 1.0, 21), f64::abs).unwrap();
        let rec = fenchel_young_check(&a, 10, 0.5).unwrap();
        assert!(rec.pass && rec.margins.len() == 2);
        assert!(fenchel_young_check(&a, 0, 0.5).is_err());
    }

    #[test]
    fn samples_include_endpoints() {
        let s = SubdifferentialInterval::interval(-1.0, 1.0).samples(11);
        assert_eq!(s.len(), 11);
        assert_eq!((s[0], s[10]), (-1.0, 1.0));
        assert!((s[5]).abs() < 1e-15);
        assert_eq!(SubdifferentialInterval::singleton(2.0).samples(11), vec![2.0]);
    }
}
