//! Randomized verification suites, their JSON reports, and single-record
//! replay from a report's witness.

mod config;
mod generate;
mod report;
mod study;
pub mod suites;

use std::path::Path;
use std::sync::OnceLock;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

pub use config::{SuiteConfig, SuiteName};
pub use generate::{pick, random_convex_grid, random_piecewise_linear, trial_rng, AUX_STREAM};
pub use report::{write_plot_data, CheckAggregate, RunInfo, SeriesPoint, VerificationReport, FAILURE_CAP};
pub use study::{convergence_study, study_pair, ConvergenceStudy, StudyRoute, StudySeries};

use crate::error::{Error, Result};
use crate::functional::{
    check_biconjugate, check_conjugate_equivalence, fenchel_young_check, GridFunctional, QuadraticFunctional,
};
use crate::functional_entropy::{
    check_corollary41, check_extension_principle, check_furuta_half_weight, pair_dual_spec, EntropySandwich,
    PairAnalysis, Quadrature, SLACK_C,
};
use crate::functional_means::{check_eq25, check_func_symmetry};
use crate::matrix::{PDMatrix, SymMatrix};
use crate::operator_entropy::{
    check_congruence_property, check_corollary42, check_entropy_at_identity, check_entropy_bounds,
    check_entropy_quadrature, check_eqp, check_furuta_skew, corollary42_sandwich,
};
use crate::operator_means::{check_agh, check_geometric_quadrature, check_mean_symmetry};
use crate::record::{checks, VerificationRecord, Witness, WitnessInputs};
use crate::weight::Weight;

/// Caps the rayon pool, read once per process.
pub const THREADS_ENV: &str = "ENTROPYLAB_THREADS";

/// Applies `ENTROPYLAB_THREADS` to the global pool and returns the pool size.
/// Results never depend on the thread count; only wall time does.
pub fn configure_threads() -> Result<usize> {
    static CONFIGURED: OnceLock<std::result::Result<(), String>> = OnceLock::new();
    let outcome = CONFIGURED.get_or_init(|| {
        let Ok(raw) = std::env::var(THREADS_ENV) else {
            return Ok(());
        };
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got `{raw}`"))?;
        // a pool built earlier in the process wins; the cap is best effort then
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        Ok(())
    });
    outcome.clone().map_err(Error::Config)?;
    Ok(rayon::current_num_threads())
}

/// Every record of one suite, in canonical order.
pub fn suite_records(config: &SuiteConfig) -> Result<Vec<VerificationRecord>> {
    config.validate()?;
    match config.suite {
        SuiteName::Operator => suites::operator_records(config),
        SuiteName::Functional => suites::functional_records(config),
        SuiteName::Crossbackend => suites::crossbackend_records(config),
    }
}

/// Runs a suite and writes its report when the config names a path.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    let threads = configure_threads()?;
    let start = Instant::now();
    let records = suite_records(config)?;
    let mut report = VerificationReport::from_records(config, &records);
    report.run = Some(RunInfo {
        timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        elapsed_seconds: start.elapsed().as_secs_f64(),
        threads,
    });
    if let Some(path) = &config.report {
        report.write(path)?;
    }
    Ok(report)
}

fn witness_of(rec: &VerificationRecord) -> Result<&Witness> {
    rec.witness
        .as_ref()
        .ok_or_else(|| Error::Config(format!("`{}` record carries no witness", rec.check)))
}

fn missing(what: &str, check: &str) -> Error {
    Error::Config(format!("`{check}` witness lacks {what}"))
}

struct Inputs<'a> {
    check: &'a str,
    witness: &'a Witness,
}

impl Inputs<'_> {
    fn matrices(&self) -> Result<(PDMatrix, PDMatrix)> {
        match &self.witness.inputs {
            WitnessInputs::Matrices { a, b: Some(b), .. } => {
                Ok((PDMatrix::from_matrix(a.clone())?, PDMatrix::from_matrix(b.clone())?))
            }
            _ => Err(missing("a matrix pair", self.check)),
        }
    }

    fn grids(&self) -> Result<(GridFunctional, Option<GridFunctional>)> {
        match &self.witness.inputs {
            WitnessInputs::Grids { f, g } => Ok((f.clone(), g.clone())),
            _ => Err(missing("grid functionals", self.check)),
        }
    }

    fn grid_pair(&self) -> Result<(GridFunctional, GridFunctional)> {
        match self.grids()? {
            (f, Some(g)) => Ok((f, g)),
            _ => Err(missing("a second functional", self.check)),
        }
    }

    fn p(&self) -> Result<Weight> {
        Weight::new(self.witness.params.p.ok_or_else(|| missing("p", self.check))?)
    }

    fn tol(&self) -> Result<f64> {
        self.witness.params.tol.ok_or_else(|| missing("tol", self.check))
    }

    fn nodes(&self) -> Result<usize> {
        self.witness.params.nodes.ok_or_else(|| missing("nodes", self.check))
    }

    fn index(&self) -> Result<usize> {
        self.witness.params.index.ok_or_else(|| missing("index", self.check))
    }

    fn quadrature(&self) -> Quadrature {
        let d = Quadrature::default();
        Quadrature {
            mean_nodes: self.witness.params.nodes.unwrap_or(d.mean_nodes),
            entropy_nodes: self.witness.params.entropy_nodes.unwrap_or(d.entropy_nodes),
        }
    }

    fn analysis(&self) -> Result<PairAnalysis> {
        let (f, g) = self.grid_pair()?;
        let slack_c = self.witness.params.slack_c.unwrap_or(SLACK_C);
        PairAnalysis::new(&f, &g, self.p()?, self.quadrature(), slack_c)
    }
}

fn scalar(m: &SymMatrix) -> f64 {
    m.matrix()[(0, 0)]
}

/// Recomputes one record from its witness. Records of fixed instances
/// (golden values, weight sums, convergence series) are recomputed from
/// their label.
pub fn replay(rec: &VerificationRecord) -> Result<VerificationRecord> {
    let check = rec.check.as_str();
    let fixed = match check {
        checks::SCALAR_GOLDEN => {
            let spec = SuiteConfig::default_for(SuiteName::Crossbackend).grid()?;
            Some(suites::golden_records(spec, &Quadrature::default())?)
        }
        checks::JACOBI_WEIGHT_SUM => {
            let p = Weight::new(rec.instance.p.ok_or_else(|| missing("p", check))?)?;
            let nodes = rec.metrics.get("nodes").map_or(suites::GEOMETRIC_QUADRATURE_NODES, |&n| n as usize);
            Some(suites::weight_sum_records(&[p], nodes)?)
        }
        checks::CONVERGENCE => Some(convergence_study()?.records()),
        _ => None,
    };
    if let Some(candidates) = fixed {
        return candidates
            .into_iter()
            .find(|r| r.instance.label == rec.instance.label && r.instance.p == rec.instance.p)
            .ok_or_else(|| Error::Config(format!("no `{check}` record matches {:?}", rec.instance.label)));
    }

    let witness = witness_of(rec)?;
    let w = Inputs { check, witness };
    let mut out = match check {
        checks::MEAN_SYMMETRY => {
            let (a, b) = w.matrices()?;
            check_mean_symmetry(&a, &b, w.p()?, w.tol()?)?
        }
        checks::AGH => {
            let (a, b) = w.matrices()?;
            check_agh(&a, &b, w.p()?, w.tol()?)?
        }
        checks::EQP_IDENTITY => {
            let (a, b) = w.matrices()?;
            check_eqp(&a, &b, w.p()?, w.tol()?)?
        }
        checks::FURUTA_SKEW => {
            let (a, b) = w.matrices()?;
            check_furuta_skew(&a, &b, w.p()?, w.tol()?)?
        }
        checks::COROLLARY42 => {
            let (a, b) = w.matrices()?;
            check_corollary42(&a, &b, w.p()?, w.tol()?)?
        }
        checks::ENTROPY_BOUNDS => {
            let (a, b) = w.matrices()?;
            check_entropy_bounds(&a, &b, w.tol()?)?
        }
        checks::GEOMETRIC_QUADRATURE => {
            let (a, b) = w.matrices()?;
            check_geometric_quadrature(&a, &b, w.p()?, w.nodes()?, w.tol()?)?
        }
        checks::ENTROPY_QUADRATURE => {
            let (a, b) = w.matrices()?;
            check_entropy_quadrature(&a, &b, w.nodes()?, w.tol()?)?
        }
        checks::CONGRUENCE => match &witness.inputs {
            WitnessInputs::Matrices { a, b: Some(b), t: Some(t) } => check_congruence_property(
                &PDMatrix::from_matrix(a.clone())?,
                &PDMatrix::from_matrix(b.clone())?,
                t,
                w.tol()?,
            )?,
            _ => return Err(missing("the matrices A, B, T", check)),
        },
        checks::ENTROPY_AT_IDENTITY => match &witness.inputs {
            WitnessInputs::Matrices { a, .. } => check_entropy_at_identity(&PDMatrix::from_matrix(a.clone())?, w.tol()?)?,
            _ => return Err(missing("a matrix", check)),
        },
        checks::CONJUGATE_EQUIVALENCE => check_conjugate_equivalence(&w.grids()?.0, w.tol()?),
        checks::BICONJUGATE => {
            let convex = witness.params.convex.ok_or_else(|| missing("convex", check))?;
            check_biconjugate(&w.grids()?.0, convex, w.tol()?)
        }
        checks::FENCHEL_YOUNG => {
            let s = witness.params.dual_point.ok_or_else(|| missing("dual_point", check))?;
            fenchel_young_check(&w.grids()?.0, w.index()?, s)?
        }
        checks::THEOREM31 => {
            let (f, g) = w.grid_pair()?;
            let samples = witness.params.samples.ok_or_else(|| missing("samples", check))?;
            EntropySandwich::new(&f, &g, w.quadrature().entropy_nodes, w.tol()?)?.check(w.index()?, samples)?
        }
        checks::EQ25 => match &witness.inputs {
            WitnessInputs::Grids { .. } => w.analysis()?.check_eq25()?,
            WitnessInputs::Matrices { .. } => {
                let (a, b) = w.matrices()?;
                let (fa, fb) = (QuadraticFunctional::from_pd(&a), QuadraticFunctional::from_pd(&b));
                check_eq25(&fa, &fb, w.p()?, w.nodes()?, w.tol()?)?
            }
        },
        checks::FUNC_SYMMETRY => match &witness.inputs {
            WitnessInputs::Grids { .. } => {
                let (f, g) = w.grid_pair()?;
                check_func_symmetry(&f, &g, w.p()?, w.nodes()?, w.tol()?)?
            }
            WitnessInputs::Matrices { .. } => {
                let (a, b) = w.matrices()?;
                let (fa, fb) = (QuadraticFunctional::from_pd(&a), QuadraticFunctional::from_pd(&b));
                check_func_symmetry(&fa, &fb, w.p()?, w.nodes()?, w.tol()?)?
            }
        },
        checks::PROP31 => {
            let (f, g) = w.grid_pair()?;
            w.analysis()?.check_prop31(&pair_dual_spec(&f, &g).points())?
        }
        checks::THEOREM41 => {
            let samples = witness.params.samples.ok_or_else(|| missing("samples", check))?;
            w.analysis()?.check_theorem41(w.index()?, samples)?
        }
        checks::PROP41 => w.analysis()?.check_prop41()?,
        checks::FURUTA_HALVES => w.analysis()?.furuta_halves()?,
        checks::FURUTA_HALF_WEIGHT => {
            let (f, g) = w.grid_pair()?;
            check_furuta_half_weight(&f, &g, &w.quadrature(), w.tol()?)?
        }
        checks::COROLLARY41 => {
            let (a, b) = w.matrices()?;
            let (fa, fb) = (QuadraticFunctional::from_pd(&a), QuadraticFunctional::from_pd(&b));
            check_corollary41(&fa, &fb, w.p()?, w.tol()?)?
        }
        checks::EXTENSION_PRINCIPLE => {
            let (a, b) = w.matrices()?;
            check_extension_principle(&a, &b, w.p()?, w.nodes()?, w.tol()?)?
        }
        checks::CROSS_BACKEND => {
            let (a, b) = w.matrices()?;
            let label = rec.instance.label.as_deref().unwrap_or_default();
            let route = label
                .split_whitespace()
                .next()
                .ok_or_else(|| missing("a route label", check))?
                .parse()?;
            let setup = suites::CrossSetup {
                spec: rec.instance.grid.ok_or_else(|| missing("a grid", check))?,
                quadrature: w.quadrature(),
                radius: witness.params.radius.ok_or_else(|| missing("radius", check))?,
                tol: w.tol()?,
            };
            let p = witness.params.p.map(Weight::new).transpose()?;
            suites::cross_backend_record(route, scalar(a.as_sym()), scalar(b.as_sym()), p, &setup)?
        }
        other => return Err(Error::Config(format!("unknown check `{other}`"))),
    };
    out.instance.seed = rec.instance.seed;
    out.instance.trial = rec.instance.trial;
    if out.instance.label.is_none() {
        out.instance.label = rec.instance.label.clone();
    }
    Ok(out)
}

/// `p, lower, entropy, upper` of the scalar Tsallis sandwich of `S_p(a|b)`,
/// evaluated at `x = 1` of the quadratic forms `c x²/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SandwichRow {
    pub p: f64,
    pub lower: f64,
    pub entropy: f64,
    pub upper: f64,
}

pub fn scalar_sandwich(a: f64, b: f64, ps: &[Weight]) -> Result<Vec<SandwichRow>> {
    let (a, b) = (PDMatrix::scalar(a)?, PDMatrix::scalar(b)?);
    ps.iter()
        .filter(|p| p.is_interior())
        .map(|&p| {
            let sw = corollary42_sandwich(&a, &b, p)?;
            Ok(SandwichRow {
                p: p.value(),
                lower: 0.5 * scalar(&sw.lower),
                entropy: 0.5 * scalar(&sw.middle),
                upper: 0.5 * scalar(&sw.upper),
            })
        })
        .collect()
}

pub fn sandwich_csv(rows: &[SandwichRow]) -> String {
    let mut out = String::from("p,lower,entropy,upper\n");
    for r in rows {
        out.push_str(&format!("{},{:e},{:e},{:e}\n", r.p, r.lower, r.entropy, r.upper));
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
