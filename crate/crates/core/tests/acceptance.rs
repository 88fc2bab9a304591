//! The eight acceptance criteria at their pinned sizes and tolerances. Each
//! test prints one `PASS` or `FAIL` line; run with `--nocapture` to see them.

use std::time::Instant;

use entropylab::functional::GridSpec;
use entropylab::functional_entropy::Quadrature;
use entropylab::harness::suites::{
    conjugation_trial, cross_backend_table, golden_records, operator_pair, pair_trial, special_trial,
    weight_sum_records, CrossSetup,
};
use entropylab::harness::{convergence_study, StudyRoute, SuiteConfig, SuiteName};
use entropylab::operator_entropy::{check_corollary42, check_entropy_bounds, check_eqp};
use entropylab::operator_means::{check_agh, check_geometric_quadrature};
use entropylab::record::{checks, VerificationRecord};
use entropylab::weight::interior_grid;
use entropylab::Weight;

const OPERATOR_TRIALS: u64 = 1000;

fn operator_config() -> SuiteConfig {
    SuiteConfig {
        seed: 0,
        trials: OPERATOR_TRIALS as usize,
        dims: (1..=8).collect(),
        cond_cap: 100.0,
        ..SuiteConfig::default_for(SuiteName::Operator)
    }
}

/// Prints the verdict line and fails the test on any failing record.
fn verdict(n: u32, title: &str, records: &[VerificationRecord], extra: &str) {
    let failed: Vec<&VerificationRecord> = records.iter().filter(|r| !r.pass).collect();
    let status = if failed.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "{status} criterion {n}: {title} ({} records, {} failed{extra})",
        records.len(),
        failed.len()
    );
    for r in failed.iter().take(10) {
        println!("    {} {}", r.summary(), r.instance.label.as_deref().unwrap_or_default());
    }
    assert!(failed.is_empty(), "criterion {n}: {} of {} records failed", failed.len(), records.len());
}

fn over_operator_pairs(mut f: impl FnMut(&entropylab::matrix::PDMatrix, &entropylab::matrix::PDMatrix, Weight, &mut Vec<VerificationRecord>)) -> Vec<VerificationRecord> {
    let cfg = operator_config();
    let ps = interior_grid();
    let mut out = Vec::new();
    for t in 0..OPERATOR_TRIALS {
        let (a, b) = operator_pair(&cfg, t);
        for &p in &ps {
            f(&a, &b, p, &mut out);
        }
    }
    out
}

#[test]
fn criterion_1_eqp_identity() {
    let start = Instant::now();
    let records = over_operator_pairs(|a, b, p, out| out.push(check_eqp(a, b, p, 1e-9).unwrap()));
    let secs = start.elapsed().as_secs_f64();
    assert_eq!(records.len(), 9000);
    verdict(1, "eqP identity, 1000 pairs x 9 weights, tol 1e-9", &records, &format!(", {secs:.1} s of 30 s"));
}

#[test]
fn criterion_2_operator_order() {
    let mut records = over_operator_pairs(|a, b, p, out| {
        out.push(check_agh(a, b, p, 1e-8).unwrap());
        out.push(check_corollary42(a, b, p, 1e-8).unwrap());
    });
    let cfg = operator_config();
    for t in 0..OPERATOR_TRIALS {
        let (a, b) = operator_pair(&cfg, t);
        records.push(check_entropy_bounds(&a, &b, 1e-8).unwrap());
    }
    verdict(2, "harmonic <= geometric <= arithmetic, entropy bounds, Tsallis sandwich, tol 1e-8", &records, "");
}

#[test]
fn criterion_3_congruence_and_identity() {
    let cfg = SuiteConfig {
        order_tol: 1e-8,
        identity_tol: 1e-9,
        ..operator_config()
    };
    let records: Vec<VerificationRecord> = (0..200).flat_map(|t| special_trial(&cfg, t).unwrap()).collect();
    assert_eq!(records.iter().filter(|r| r.check == checks::CONGRUENCE).count(), 200);
    assert_eq!(records.iter().filter(|r| r.check == checks::ENTROPY_AT_IDENTITY).count(), 200);
    verdict(3, "congruence within 1e-8, S(A|I) = -A log A within 1e-9, 200 instances each", &records, "");
}

#[test]
fn criterion_4_quadrature_convergence() {
    let study = convergence_study().unwrap();
    let mut records: Vec<VerificationRecord> = study
        .series
        .iter()
        .filter(|s| s.route != StudyRoute::GridGeometric)
        .map(|s| s.record())
        .collect();
    for s in study.series.iter().filter(|s| s.route == StudyRoute::OperatorGeometric) {
        assert_eq!(s.nodes, [8, 16, 32, 64]);
    }
    let entropy = study.series.iter().find(|s| s.route == StudyRoute::OperatorEntropy).unwrap();
    assert_eq!(entropy.nodes.last(), Some(&128));

    records.extend(over_operator_pairs(|a, b, p, out| {
        out.push(check_geometric_quadrature(a, b, p, 64, 1e-6).unwrap());
    }));
    let cfg = operator_config();
    for t in 0..OPERATOR_TRIALS {
        let (a, b) = operator_pair(&cfg, t);
        records.push(entropylab::operator_entropy::check_entropy_quadrature(&a, &b, 128, 1e-7).unwrap());
    }
    records.extend(weight_sum_records(&interior_grid(), 64).unwrap());
    for r in records.iter().filter(|r| r.check == checks::JACOBI_WEIGHT_SUM) {
        assert_eq!(r.margins[0].tolerance, 1e-12);
    }
    verdict(
        4,
        "geometric quadrature <= 1e-6 at 64 nodes and strictly decreasing, entropy quadrature <= 1e-7 at 128, weight sums within 1e-12",
        &records,
        "",
    );
}

#[test]
fn criterion_5_conjugation() {
    let cfg = SuiteConfig {
        conjugation_n: 501,
        ..SuiteConfig::default_for(SuiteName::Functional)
    };
    let records: Vec<VerificationRecord> = (0..100).flat_map(|t| conjugation_trial(&cfg, t).unwrap()).collect();
    let nonconvex = records
        .iter()
        .filter(|r| r.check == checks::BICONJUGATE && r.margin("fixed_point").is_none())
        .count();
    assert_eq!(nonconvex, 50);
    for r in &records {
        let tol = if r.check == checks::CONJUGATE_EQUIVALENCE { 1e-12 } else { 1e-9 };
        assert!(r.margins.iter().all(|m| m.tolerance == tol), "{}", r.summary());
    }
    verdict(5, "fast = brute-force conjugate within 1e-12, f** <= f, f** = f within 1e-9 if convex", &records, "");
}

#[test]
fn criterion_6_cross_backend_table() {
    let setup = CrossSetup {
        spec: GridSpec::new(-10.0, 10.0, 4001).unwrap(),
        quadrature: Quadrature {
            mean_nodes: 64,
            entropy_nodes: 128,
        },
        radius: 2.0,
        tol: 1e-3,
    };
    let start = Instant::now();
    let records = cross_backend_table(&[0.5, 1.0, 2.0, 4.0], &interior_grid(), &setup).unwrap();
    let secs = start.elapsed().as_secs_f64();
    // 16 ordered pairs: S once, five weighted routes at nine weights
    assert_eq!(records.len(), 16 * (1 + 5 * 9));
    verdict(
        6,
        "grid vs quadratic backend, sup over [-2, 2] within 1e-3",
        &records,
        &format!(", {secs:.1} s of 120 s"),
    );
}

#[test]
fn criterion_7_functional_inequalities() {
    let cfg = SuiteConfig {
        trials: 100,
        slack_c: 10.0,
        points_per_pair: 5,
        ..SuiteConfig::default_for(SuiteName::Functional)
    };
    let ps = interior_grid();
    let wanted = [
        checks::EQ25,
        checks::THEOREM31,
        checks::PROP31,
        checks::THEOREM41,
        checks::PROP41,
    ];
    let records: Vec<VerificationRecord> = (0..cfg.trials as u64)
        .flat_map(|t| pair_trial(&cfg, &ps, t).unwrap())
        .filter(|r| wanted.contains(&r.check.as_str()))
        .collect();
    let count = |c: &str| records.iter().filter(|r| r.check == c).count();
    assert_eq!(count(checks::THEOREM41), 100 * 9 * 5);
    assert_eq!(count(checks::PROP41), 50 * 9);
    verdict(
        7,
        "order of means, entropy sandwich, conjugate identity, parametric sandwich, skew symmetry",
        &records,
        "",
    );
}

#[test]
fn criterion_8_scalar_golden_values() {
    let spec = GridSpec::new(-10.0, 10.0, 4001).unwrap();
    let records = golden_records(spec, &Quadrature::default()).unwrap();
    for route in ["spectral", "quadratic", "integral", "grid"] {
        assert!(records
            .iter()
            .any(|r| r.instance.label.as_deref().is_some_and(|l| l.starts_with(route))));
    }
    verdict(8, "S(1|e) = 1, S_1/2(1|e) = sqrt(e), T_1/2(1|4) = 2, 2 ln 4 chain, every route", &records, "");
}
