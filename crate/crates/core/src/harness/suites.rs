//! Record producers for the three suites. Each returns its records in
//! canonical order: by instance set, then trial index, then `p`.

use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::config::SuiteConfig;
use super::generate::{pick, random_convex_grid, random_piecewise_linear, trial_rng, AUX_STREAM};
use super::study::convergence_study;
use crate::error::{Error, Result};
use crate::functional::{
    check_biconjugate, check_conjugate_equivalence, fenchel_young_check, sample_quadratic, subdifferential,
    sup_deviation, GridFunctional, GridSpec, QuadraticFunctional,
};
use crate::functional_entropy::{
    check_corollary41, check_extension_principle, check_furuta_half_weight, grid_furuta, grid_relative_entropy,
    grid_tsallis, pair_dual_spec, Entropy, EntropySandwich, PairAnalysis, Quadrature,
};
use crate::functional_means::{check_eq25, check_func_symmetry, grid_geometric, grid_harmonic, Functional};
use crate::matrix::{random_invertible, random_spd_with, PDMatrix, SymMatrix};
use crate::operator_entropy::{
    check_congruence_property, check_corollary42, check_entropy_at_identity, check_entropy_bounds,
    check_entropy_quadrature, check_eqp, check_furuta_skew, furuta_entropy, furuta_via_identity,
    furuta_via_identity_integral, relative_entropy, relative_entropy_integral, tsallis_entropy,
};
use crate::operator_means::{
    check_agh, check_geometric_quadrature, check_mean_symmetry, geometric_mean_integral,
};
use crate::quadrature::GaussRule;
use crate::record::{checks, Instance, Margin, VerificationRecord, Witness};
use crate::weight::Weight;

pub const GEOMETRIC_QUADRATURE_NODES: usize = 64;
pub const GEOMETRIC_QUADRATURE_TOL: f64 = 1e-6;
pub const ENTROPY_QUADRATURE_NODES: usize = 128;
pub const ENTROPY_QUADRATURE_TOL: f64 = 1e-7;
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
pub const CONJUGATE_TOL: f64 = 1e-12;
pub const BICONJUGATE_TOL: f64 = 1e-9;
pub const HALF_WEIGHT_TOL: f64 = 1e-10;
/// Smallest singular value of the random congruence matrices.
pub const CONGRUENCE_SIGMA_MIN: f64 = 0.2;

/// Tolerances of the scalar golden values by route.
pub const SPECTRAL_TOL: f64 = 1e-12;
pub const INTEGRAL_TOL: f64 = 1e-8;
pub const GRID_TOL: f64 = 1e-3;

pub(crate) fn weights(cfg: &SuiteConfig) -> Result<Vec<Weight>> {
    cfg.p_values.iter().map(|&p| Weight::new(p)).collect()
}

fn dim_of(cfg: &SuiteConfig, t: u64) -> usize {
    cfg.dims[t as usize % cfg.dims.len()]
}

fn tagged(records: Vec<VerificationRecord>, seed: u64, t: u64) -> Vec<VerificationRecord> {
    records.into_iter().map(|r| r.with_trial(seed, t)).collect()
}

fn par_trials<F>(n: usize, f: F) -> Result<Vec<VerificationRecord>>
where
    F: Fn(u64) -> Result<Vec<VerificationRecord>> + Sync + Send,
{
    let per_trial: Vec<Vec<VerificationRecord>> = (0..n as u64).into_par_iter().map(f).collect::<Result<_>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

/// The random matrix pair of operator trial `t`.
pub fn operator_pair(cfg: &SuiteConfig, t: u64) -> (PDMatrix, PDMatrix) {
    let mut rng = trial_rng(cfg.seed, t);
    let dim = dim_of(cfg, t);
    let a = random_spd_with(&mut rng, dim, cfg.cond_cap);
    let b = random_spd_with(&mut rng, dim, cfg.cond_cap);
    (a, b)
}

pub fn operator_trial(cfg: &SuiteConfig, ps: &[Weight], t: u64) -> Result<Vec<VerificationRecord>> {
    let (a, b) = operator_pair(cfg, t);
    let mut out = vec![
        check_entropy_bounds(&a, &b, cfg.order_tol)?,
        check_entropy_quadrature(&a, &b, ENTROPY_QUADRATURE_NODES, ENTROPY_QUADRATURE_TOL)?,
    ];
    for &p in ps {
        out.push(check_agh(&a, &b, p, cfg.order_tol)?);
        out.push(check_mean_symmetry(&a, &b, p, cfg.identity_tol)?);
        out.push(check_furuta_skew(&a, &b, p, cfg.identity_tol)?);
        if p.is_interior() {
            out.push(check_eqp(&a, &b, p, cfg.identity_tol)?);
            out.push(check_corollary42(&a, &b, p, cfg.order_tol)?);
            out.push(check_geometric_quadrature(
                &a,
                &b,
                p,
                GEOMETRIC_QUADRATURE_NODES,
                GEOMETRIC_QUADRATURE_TOL,
            )?);
        }
    }
    Ok(tagged(out, cfg.seed, t))
}

/// Congruence `Tᵀ S(A|B) T = S(TᵀAT|TᵀBT)` and `S(A|I) = −A log A`.
pub fn special_trial(cfg: &SuiteConfig, t: u64) -> Result<Vec<VerificationRecord>> {
    let mut rng = trial_rng(cfg.seed, AUX_STREAM + t);
    let dim = dim_of(cfg, t);
    let a = random_spd_with(&mut rng, dim, cfg.cond_cap);
    let b = random_spd_with(&mut rng, dim, cfg.cond_cap);
    let m = random_invertible(&mut rng, dim, CONGRUENCE_SIGMA_MIN);
    let out = vec![
        check_congruence_property(&a, &b, &m, cfg.order_tol)?,
        check_entropy_at_identity(&a, cfg.identity_tol)?,
    ];
    Ok(tagged(out, cfg.seed, AUX_STREAM + t))
}

pub fn weight_sum_records(ps: &[Weight], nodes: usize) -> Result<Vec<VerificationRecord>> {
    ps.iter()
        .filter(|p| p.is_interior())
        .map(|&p| {
            let sum = GaussRule::geometric_mean_weight(p.value(), nodes)?.weight_sum();
            Ok(VerificationRecord::new(
                checks::JACOBI_WEIGHT_SUM,
                Instance {
                    p: Some(p.value()),
                    ..Instance::default()
                },
                vec![Margin::deviation("sum_minus_one", (sum - 1.0).abs(), WEIGHT_SUM_TOL)],
            )
            .with_metric("nodes", nodes as f64))
        })
        .collect()
}

pub fn operator_records(cfg: &SuiteConfig) -> Result<Vec<VerificationRecord>> {
    let ps = weights(cfg)?;
    let mut out = par_trials(cfg.trials, |t| operator_trial(cfg, &ps, t))?;
    out.extend(par_trials(cfg.special_trials, |t| special_trial(cfg, t))?);
    out.extend(weight_sum_records(&ps, GEOMETRIC_QUADRATURE_NODES)?);
    out.extend(convergence_study()?.records());
    Ok(out)
}

/// Fast against brute-force conjugation and the biconjugate bounds on one
/// random piecewise-linear functional; even trials are convex.
pub fn conjugation_trial(cfg: &SuiteConfig, t: u64) -> Result<Vec<VerificationRecord>> {
    let mut rng = trial_rng(cfg.seed, AUX_STREAM + t);
    let spec = GridSpec::new(cfg.x_min, cfg.x_max, cfg.conjugation_n)?;
    let convex = t % 2 == 0;
    let f = random_piecewise_linear(&mut rng, spec, convex);
    let out = vec![
        check_conjugate_equivalence(&f, CONJUGATE_TOL),
        check_biconjugate(&f, convex, BICONJUGATE_TOL),
    ];
    Ok(tagged(out, cfg.seed, AUX_STREAM + t))
}

/// The random convex pair of functional trial `t`: finite everywhere on even
/// trials, with restricted domains on odd ones.
pub fn functional_pair(cfg: &SuiteConfig, t: u64) -> Result<(GridFunctional, GridFunctional, rand_chacha::ChaCha8Rng)> {
    let mut rng = trial_rng(cfg.seed, t);
    let spec = cfg.grid()?;
    let restrict = t % 2 == 1;
    let f = random_convex_grid(&mut rng, spec, restrict);
    let g = random_convex_grid(&mut rng, spec, restrict);
    Ok((f, g, rng))
}

pub fn pair_trial(cfg: &SuiteConfig, ps: &[Weight], t: u64) -> Result<Vec<VerificationRecord>> {
    let (f, g, mut rng) = functional_pair(cfg, t)?;
    let quad = cfg.quadrature();
    let mut out = Vec::new();

    let mut sandwich = EntropySandwich::new(&f, &g, quad.entropy_nodes, 0.0)?;
    let coarse = grid_relative_entropy(&f, &g, (quad.entropy_nodes / 2).max(2))?;
    let entropy_error = sup_deviation(sandwich.entropy.values(), coarse.values()).0;
    sandwich.slack = cfg.slack_c * (f.step() + entropy_error);
    for i in pick(&mut rng, &f.interior_indices(), cfg.points_per_pair) {
        out.push(
            sandwich
                .check(i, cfg.subdiff_samples)?
                .with_metric("quadrature_error", entropy_error),
        );
        let sub = subdifferential(&f, i);
        out.push(fenchel_young_check(&f, i, 0.5 * (sub.lo + sub.hi))?);
    }

    let dual = pair_dual_spec(&f, &g).points();
    for &p in ps.iter().filter(|p| p.is_interior()) {
        let an = PairAnalysis::new(&f, &g, p, quad, cfg.slack_c)?;
        out.push(an.check_eq25()?);
        out.push(an.check_prop31(&dual)?);
        for i in pick(&mut rng, &an.geometric().interior_indices(), cfg.points_per_pair) {
            out.push(an.check_theorem41(i, cfg.subdiff_samples)?);
        }
        if f.is_everywhere_finite() && g.is_everywhere_finite() {
            out.push(an.check_prop41()?);
        }
        out.push(an.furuta_halves()?);
        out.push(check_func_symmetry(&f, &g, p, quad.mean_nodes, an.slack())?);
        if p == Weight::HALF {
            out.push(check_furuta_half_weight(&f, &g, &quad, HALF_WEIGHT_TOL)?);
        }
    }
    Ok(tagged(out, cfg.seed, t))
}

pub fn functional_records(cfg: &SuiteConfig) -> Result<Vec<VerificationRecord>> {
    let ps = weights(cfg)?;
    let mut out = par_trials(cfg.conjugation_trials, |t| conjugation_trial(cfg, t))?;
    out.extend(par_trials(cfg.trials, |t| pair_trial(cfg, &ps, t))?);
    Ok(out)
}

/// A functional construction compared across backends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Harmonic,
    Geometric,
    RelativeEntropy,
    Tsallis,
    TsallisConj,
    Furuta,
}

impl Route {
    pub const ALL: [Route; 6] = [
        Route::Harmonic,
        Route::Geometric,
        Route::RelativeEntropy,
        Route::Tsallis,
        Route::TsallisConj,
        Route::Furuta,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Route::Harmonic => "H_p",
            Route::Geometric => "G_p",
            Route::RelativeEntropy => "S",
            Route::Tsallis => "T_p",
            Route::TsallisConj => "T*_p",
            Route::Furuta => "S_p",
        }
    }

    pub fn uses_p(self) -> bool {
        self != Route::RelativeEntropy
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Route::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown route `{s}`")))
    }
}

/// Grid and window of the cross-backend comparison.
#[derive(Clone, Copy, Debug)]
pub struct CrossSetup {
    pub spec: GridSpec,
    pub quadrature: Quadrature,
    pub radius: f64,
    pub tol: f64,
}

impl CrossSetup {
    pub fn from_config(cfg: &SuiteConfig) -> Result<Self> {
        Ok(CrossSetup {
            spec: cfg.grid()?,
            quadrature: cfg.quadrature(),
            radius: cfg.cross_radius,
            tol: cfg.crossbackend_tol,
        })
    }
}

/// `sup_{|x| ≤ r} |F(x) − c x²/2|` over grid points, and how many points of
/// the window are `+∞`.
fn window_deviation(f: &GridFunctional, radius: f64, c: f64) -> (f64, usize) {
    let mut dev = 0.0f64;
    let mut missing = 0;
    for i in 0..f.len() {
        let x = f.x(i);
        if x.abs() > radius {
            continue;
        }
        match f.value(i).finite() {
            Some(v) => dev = dev.max((v - 0.5 * c * x * x).abs()),
            None => missing += 1,
        }
    }
    (dev, missing)
}

/// One entry of the cross-backend table: the grid route on sampled `f_a`,
/// `f_b` against the exact quadratic backend.
pub fn cross_backend_record(route: Route, a: f64, b: f64, p: Option<Weight>, setup: &CrossSetup) -> Result<VerificationRecord> {
    let q = &setup.quadrature;
    let (fa, fb) = (QuadraticFunctional::scalar(a), QuadraticFunctional::scalar(b));
    let (f, g) = (sample_quadratic(&fa, setup.spec)?, sample_quadratic(&fb, setup.spec)?);
    let weight = || p.ok_or_else(|| Error::Precondition(format!("route {route} needs p")));
    let (grid, exact) = match route {
        Route::Harmonic => (grid_harmonic(&f, &g, weight()?)?, fa.harmonic(&fb, weight()?)?),
        Route::Geometric => (
            grid_geometric(&f, &g, weight()?, q.mean_nodes)?,
            fa.geometric(&fb, weight()?, q.mean_nodes)?,
        ),
        Route::RelativeEntropy => (grid_relative_entropy(&f, &g, q.entropy_nodes)?, fa.relative_entropy(&fb, q)?),
        Route::Tsallis => (grid_tsallis(&f, &g, weight()?, q.mean_nodes)?, fa.tsallis(&fb, weight()?, q)?),
        Route::TsallisConj => (f.tsallis_conj(&g, weight()?, q)?, fa.tsallis_conj(&fb, weight()?, q)?),
        Route::Furuta => (grid_furuta(&f, &g, weight()?, q)?, fa.furuta(&fb, weight()?, q)?),
    };
    let c = exact.coefficient()?;
    let (dev, missing) = window_deviation(&grid, setup.radius, c);
    let mut margins = vec![Margin::deviation("sup_error", dev, setup.tol)];
    if missing > 0 {
        margins.push(Margin::deviation("infinite_in_window", missing as f64, 0.0));
    }
    let mut witness = Witness::matrices(&PDMatrix::scalar(a)?, &PDMatrix::scalar(b)?, None)
        .with_nodes(q.mean_nodes)
        .with_entropy_nodes(q.entropy_nodes)
        .with_tol(setup.tol)
        .with_radius(setup.radius);
    if let Some(p) = p {
        witness = witness.with_p(p);
    }
    Ok(VerificationRecord::new(
        checks::CROSS_BACKEND,
        Instance {
            grid: Some(setup.spec),
            p: p.map(Weight::value),
            label: Some(format!("{route} a={a} b={b}")),
            ..Instance::default()
        },
        margins,
    )
    .with_witness(witness)
    .with_metric("exact_coefficient", c))
}

/// Every route for every ordered pair of `values` and every interior `p`.
pub fn cross_backend_table(values: &[f64], ps: &[Weight], setup: &CrossSetup) -> Result<Vec<VerificationRecord>> {
    let pairs: Vec<(f64, f64)> = values.iter().flat_map(|&a| values.iter().map(move |&b| (a, b))).collect();
    let interior: Vec<Weight> = ps.iter().copied().filter(|p| p.is_interior()).collect();
    let per_pair: Vec<Vec<VerificationRecord>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut out = vec![cross_backend_record(Route::RelativeEntropy, a, b, None, setup)?];
            for &p in &interior {
                for route in Route::ALL.into_iter().filter(|r| r.uses_p()) {
                    out.push(cross_backend_record(route, a, b, Some(p), setup)?);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(per_pair.into_iter().flatten().collect())
}

/// Quadratic-backend checks on one random matrix pair.
pub fn extension_trial(cfg: &SuiteConfig, ps: &[Weight], t: u64) -> Result<Vec<VerificationRecord>> {
    let (a, b) = operator_pair(cfg, t);
    let (fa, fb) = (QuadraticFunctional::from_pd(&a), QuadraticFunctional::from_pd(&b));
    let mut out = Vec::new();
    for &p in ps.iter().filter(|p| p.is_interior()) {
        out.push(check_extension_principle(&a, &b, p, cfg.extension_nodes, cfg.identity_tol)?);
        out.push(check_corollary41(&fa, &fb, p, cfg.order_tol)?);
        out.push(check_eq25(&fa, &fb, p, cfg.mean_nodes, cfg.order_tol)?);
        out.push(check_func_symmetry(&fa, &fb, p, cfg.mean_nodes, cfg.identity_tol)?);
    }
    Ok(tagged(out, cfg.seed, t))
}

fn scalar_of(m: &SymMatrix) -> f64 {
    m.matrix()[(0, 0)]
}

/// Quadratic coefficient read at the unit point: `c = 2 F(1)` for `F = f_c`.
fn unit_coefficient(f: &GridFunctional) -> Result<f64> {
    let i = f
        .spec()
        .nearest_index(1.0)
        .ok_or_else(|| Error::Precondition("the grid does not contain x = 1".into()))?;
    let x = f.x(i);
    f.value(i)
        .finite()
        .map(|v| 2.0 * v / (x * x))
        .ok_or_else(|| Error::Domain("value at x = 1 is +inf".into()))
}

fn golden(route: &str, quantity: &str, got: f64, want: f64, tol: f64) -> VerificationRecord {
    VerificationRecord::new(
        checks::SCALAR_GOLDEN,
        Instance {
            label: Some(format!("{route}: {quantity}")),
            ..Instance::default()
        },
        vec![Margin::deviation("error", (got - want).abs(), tol)],
    )
    .with_metric("value", got)
    .with_metric("expected", want)
}

/// `S(1|e) = 1`, `S_{1/2}(1|e) = √e`, `T_{1/2}(1|4) = 2` and
/// `S_{1/2}(1|4) = −S(2|1)/½ = S(2|4)/½ = 2 ln 4` through every route.
pub fn golden_records(spec: GridSpec, quad: &Quadrature) -> Result<Vec<VerificationRecord>> {
    let half = Weight::HALF;
    let s = |v: f64| PDMatrix::scalar(v);
    let (one, e, four) = (s(1.0)?, s(E)?, s(4.0)?);
    let chain = 2.0 * 4f64.ln();
    let mut out = Vec::new();

    let route = "spectral";
    out.push(golden(route, "S(1|e)", scalar_of(&relative_entropy(&one, &e)?), 1.0, SPECTRAL_TOL));
    out.push(golden(route, "S_1/2(1|e)", scalar_of(&furuta_entropy(&one, &e, half)?), E.sqrt(), SPECTRAL_TOL));
    out.push(golden(route, "T_1/2(1|4)", scalar_of(&tsallis_entropy(&one, &four, half)?), 2.0, SPECTRAL_TOL));
    out.push(golden(route, "S_1/2(1|4)", scalar_of(&furuta_entropy(&one, &four, half)?), chain, SPECTRAL_TOL));
    let (via_a, via_b) = furuta_via_identity(&one, &four, half)?;
    out.push(golden(route, "-S(2|1)/p", scalar_of(&via_a), chain, SPECTRAL_TOL));
    out.push(golden(route, "S(2|4)/(1-p)", scalar_of(&via_b), chain, SPECTRAL_TOL));

    let route = "quadratic";
    let q = |v: f64| QuadraticFunctional::scalar(v);
    out.push(golden(route, "S(1|e)", q(1.0).relative_entropy(&q(E), quad)?.coefficient()?, 1.0, SPECTRAL_TOL));
    out.push(golden(route, "S_1/2(1|e)", q(1.0).furuta(&q(E), half, quad)?.coefficient()?, E.sqrt(), SPECTRAL_TOL));
    out.push(golden(route, "T_1/2(1|4)", q(1.0).tsallis(&q(4.0), half, quad)?.coefficient()?, 2.0, SPECTRAL_TOL));
    out.push(golden(route, "S_1/2(1|4)", q(1.0).furuta(&q(4.0), half, quad)?.coefficient()?, chain, SPECTRAL_TOL));

    let route = "integral";
    let nodes = quad.entropy_nodes;
    out.push(golden(route, "S(1|e)", scalar_of(&relative_entropy_integral(&one, &e, nodes)?), 1.0, INTEGRAL_TOL));
    let (via_a, via_b) = furuta_via_identity_integral(&one, &e, half, nodes)?;
    out.push(golden(route, "-S(G|1)/p at (1,e)", scalar_of(&via_a), E.sqrt(), INTEGRAL_TOL));
    out.push(golden(route, "S(G|e)/(1-p) at (1,e)", scalar_of(&via_b), E.sqrt(), INTEGRAL_TOL));
    let gm = geometric_mean_integral(&one, &four, half, quad.mean_nodes)?;
    out.push(golden(route, "T_1/2(1|4)", (scalar_of(gm.as_sym()) - 1.0) / 0.5, 2.0, INTEGRAL_TOL));
    let (via_a, via_b) = furuta_via_identity_integral(&one, &four, half, nodes)?;
    out.push(golden(route, "-S(2|1)/p", scalar_of(&via_a), chain, INTEGRAL_TOL));
    out.push(golden(route, "S(2|4)/(1-p)", scalar_of(&via_b), chain, INTEGRAL_TOL));

    let route = "grid";
    let sq = |v: f64| sample_quadratic(&QuadraticFunctional::scalar(v), spec);
    let (f1, fe, f4) = (sq(1.0)?, sq(E)?, sq(4.0)?);
    let grid_s = grid_relative_entropy(&f1, &fe, quad.entropy_nodes)?;
    out.push(golden(route, "S(1|e)", unit_coefficient(&grid_s)?, 1.0, GRID_TOL));
    let grid_sp = grid_furuta(&f1, &fe, half, quad)?;
    out.push(golden(route, "S_1/2(1|e)", unit_coefficient(&grid_sp)?, E.sqrt(), GRID_TOL));
    let grid_t = grid_tsallis(&f1, &f4, half, quad.mean_nodes)?;
    out.push(golden(route, "T_1/2(1|4)", unit_coefficient(&grid_t)?, 2.0, GRID_TOL));
    let grid_sp4 = grid_furuta(&f1, &f4, half, quad)?;
    out.push(golden(route, "S_1/2(1|4)", unit_coefficient(&grid_sp4)?, chain, GRID_TOL));
    let g = grid_geometric(&f1, &f4, half, quad.mean_nodes)?;
    let via_a = grid_relative_entropy(&g, &f1, quad.entropy_nodes)?.map(|_, v| -v / 0.5)?;
    let via_b = grid_relative_entropy(&g, &f4, quad.entropy_nodes)?.map(|_, v| v / 0.5)?;
    out.push(golden(route, "-S(G|f_1)/p", unit_coefficient(&via_a)?, chain, GRID_TOL));
    out.push(golden(route, "S(G|f_4)/(1-p)", unit_coefficient(&via_b)?, chain, GRID_TOL));
    Ok(out)
}

pub fn crossbackend_records(cfg: &SuiteConfig) -> Result<Vec<VerificationRecord>> {
    let ps = weights(cfg)?;
    let setup = CrossSetup::from_config(cfg)?;
    let mut out = cross_backend_table(&cfg.cross_values, &ps, &setup)?;
    out.extend(par_trials(cfg.trials, |t| extension_trial(cfg, &ps, t))?);
    out.extend(golden_records(setup.spec, &setup.quadrature)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::SuiteName;

    #[test]
    fn golden_values_pass_on_every_route() {
        let spec = GridSpec::new(-10.0, 10.0, 4001).unwrap();
        for rec in golden_records(spec, &Quadrature::default()).unwrap() {
            assert!(rec.pass, "{}", rec.summary());
        }
    }

    #[test]
    fn small_operator_trial() {
        let cfg = SuiteConfig::default_for(SuiteName::Operator);
        let ps = weights(&cfg).unwrap();
        for t in 0..3 {
            for rec in operator_trial(&cfg, &ps, t).unwrap() {
                assert!(rec.pass, "{}", rec.summary());
            }
        }
    }

    #[test]
    fn route_names_round_trip() {
        for r in Route::ALL {
            assert_eq!(r.as_str().parse::<Route>().unwrap(), r);
        }
    }
}
