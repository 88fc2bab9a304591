//! Quadrature convergence in the node count on fixed instances.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::functional::{sample_quadratic, sup_deviation, GridSpec, QuadraticFunctional};
use crate::functional_means::grid_geometric;
use crate::matrix::PDMatrix;
use crate::operator_entropy::{relative_entropy, relative_entropy_integral};
use crate::operator_means::{geometric_mean, geometric_mean_integral};
use crate::record::{checks, Instance, Margin, VerificationRecord, Witness};
use crate::weight::Weight;

pub const GEOMETRIC_NODES: [usize; 4] = [8, 16, 32, 64];
pub const ENTROPY_NODES: [usize; 5] = [8, 16, 32, 64, 128];
pub const GRID_NODES: [usize; 5] = [4, 8, 16, 32, 64];
/// Node count of the grid reference solution.
pub const GRID_REFERENCE_NODES: usize = 256;
pub const STUDY_WEIGHTS: [f64; 3] = [0.1, 0.5, 0.9];

/// `A = diag(10, 0.1)`, `B = diag(0.1, 10)`: the relative spectrum
/// `{0.01, 100}` spans the whole condition range of the suites.
pub fn study_pair() -> (PDMatrix, PDMatrix) {
    let a = PDMatrix::diagonal(&[10.0, 0.1]).expect("positive diagonal");
    let b = PDMatrix::diagonal(&[0.1, 10.0]).expect("positive diagonal");
    (a, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyRoute {
    /// `‖G_n − A ♯_p B‖_F / ‖A ♯_p B‖_F`.
    OperatorGeometric,
    /// `‖S_n − S(A|B)‖_F`.
    OperatorEntropy,
    /// `sup |G_n − G_ref|` for `G_p(f_1, f_4)` sampled on `[−4, 4]`.
    GridGeometric,
}

impl StudyRoute {
    pub fn as_str(self) -> &'static str {
        match self {
            StudyRoute::OperatorGeometric => "operator_geometric",
            StudyRoute::OperatorEntropy => "operator_entropy",
            StudyRoute::GridGeometric => "grid_geometric",
        }
    }

    /// Bound on the error at the largest node count. The grid integrand has
    /// kinks in `t`, so its bound is the cross-backend tolerance.
    pub fn final_tol(self) -> f64 {
        match self {
            StudyRoute::OperatorGeometric => 1e-6,
            StudyRoute::OperatorEntropy => 1e-7,
            StudyRoute::GridGeometric => 1e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudySeries {
    pub route: StudyRoute,
    pub p: Option<f64>,
    pub nodes: Vec<usize>,
    pub errors: Vec<f64>,
}

impl StudySeries {
    /// Whether each error is strictly below the previous one.
    pub fn monotone(&self) -> Vec<bool> {
        std::iter::once(true)
            .chain(self.errors.windows(2).map(|w| w[1] < w[0]))
            .collect()
    }

    /// One margin per refinement step, positive when the error decreased:
    /// `ln(e_k / e_{k+1})`, or minus the growth factor's log otherwise.
    pub fn record(&self) -> VerificationRecord {
        let mut margins: Vec<Margin> = self
            .nodes
            .windows(2)
            .zip(self.errors.windows(2))
            .map(|(n, e)| {
                let value = if e[1] < e[0] {
                    (e[0] / e[1]).ln()
                } else {
                    -(e[1] / e[0]).ln().max(f64::MIN_POSITIVE)
                };
                Margin::new(format!("decrease_{}_{}", n[0], n[1]), value, 0.0)
            })
            .collect();
        let last = *self.errors.last().expect("nonempty series");
        margins.push(Margin::deviation("final_error", last, self.route.final_tol()));
        let mut rec = VerificationRecord::new(
            checks::CONVERGENCE,
            Instance {
                p: self.p,
                label: Some(self.route.as_str().to_string()),
                ..Instance::default()
            },
            margins,
        );
        if self.route != StudyRoute::GridGeometric {
            let (a, b) = study_pair();
            let mut witness = Witness::matrices(&a, &b, None).with_nodes(*self.nodes.last().expect("nonempty series"));
            if let Some(p) = self.p {
                witness = witness.with_p(Weight::new(p).expect("study weight"));
            }
            rec = rec.with_witness(witness);
        }
        for (n, e) in self.nodes.iter().zip(&self.errors) {
            rec = rec.with_metric(format!("error_{n}"), *e);
        }
        rec
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub series: Vec<StudySeries>,
}

pub fn convergence_study() -> Result<ConvergenceStudy> {
    let (a, b) = study_pair();
    let mut series = Vec::new();
    for &pv in &STUDY_WEIGHTS {
        let p = Weight::new(pv)?;
        let exact = geometric_mean(&a, &b, p)?;
        let norm = exact.as_sym().frobenius_norm();
        let errors = GEOMETRIC_NODES
            .iter()
            .map(|&n| {
                let approx = geometric_mean_integral(&a, &b, p, n)?;
                Ok(approx.as_sym().sub(exact.as_sym()).frobenius_norm() / norm)
            })
            .collect::<Result<_>>()?;
        series.push(StudySeries {
            route: StudyRoute::OperatorGeometric,
            p: Some(pv),
            nodes: GEOMETRIC_NODES.to_vec(),
            errors,
        });
    }

    let exact = relative_entropy(&a, &b)?;
    let errors = ENTROPY_NODES
        .iter()
        .map(|&n| Ok(relative_entropy_integral(&a, &b, n)?.sub(&exact).frobenius_norm()))
        .collect::<Result<_>>()?;
    series.push(StudySeries {
        route: StudyRoute::OperatorEntropy,
        p: None,
        nodes: ENTROPY_NODES.to_vec(),
        errors,
    });

    let spec = GridSpec::new(-4.0, 4.0, 401)?;
    let f = sample_quadratic(&QuadraticFunctional::scalar(1.0), spec)?;
    let g = sample_quadratic(&QuadraticFunctional::scalar(4.0), spec)?;
    for &pv in &STUDY_WEIGHTS {
        let p = Weight::new(pv)?;
        let reference = grid_geometric(&f, &g, p, GRID_REFERENCE_NODES)?;
        let errors = GRID_NODES
            .iter()
            .map(|&n| Ok(sup_deviation(grid_geometric(&f, &g, p, n)?.values(), reference.values()).0))
            .collect::<Result<_>>()?;
        series.push(StudySeries {
            route: StudyRoute::GridGeometric,
            p: Some(pv),
            nodes: GRID_NODES.to_vec(),
            errors,
        });
    }
    Ok(ConvergenceStudy { series })
}

impl ConvergenceStudy {
    pub fn records(&self) -> Vec<VerificationRecord> {
        self.series.iter().map(StudySeries::record).collect()
    }

    pub fn passed(&self) -> bool {
        self.records().iter().all(|r| r.pass)
    }

    /// `route,p,nodes,error,monotone`, with `monotone` true when the error is
    /// strictly below the previous row of the same series.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("route,p,nodes,error,monotone\n");
        for s in &self.series {
            let p = s.p.map(|p| p.to_string()).unwrap_or_default();
            for ((n, e), m) in s.nodes.iter().zip(&s.errors).zip(s.monotone()) {
                let _ = writeln!(out, "{},{p},{n},{e:e},{m}", s.route.as_str());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn study_converges_monotonically() {
        let study = convergence_study().unwrap();
        for rec in study.records() {
            assert!(rec.pass, "{}", rec.summary());
        }
    }

    #[test]
    fn non_decrease_gives_negative_margin() {
        let s = StudySeries {
            route: StudyRoute::OperatorEntropy,
            p: None,
            nodes: vec![8, 16],
            errors: vec![1e-9, 1e-9],
        };
        let rec = s.record();
        assert!(!rec.pass);
        assert!(rec.margin("decrease_8_16").unwrap().value < 0.0);
    }

    #[test]
    fn csv_has_one_row_per_node_count() {
        let study = convergence_study().unwrap();
        let rows: usize = study.series.iter().map(|s| s.nodes.len()).sum();
        assert_eq!(study.to_csv().lines().count(), rows + 1);
    }
}
