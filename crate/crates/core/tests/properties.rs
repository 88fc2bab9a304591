use proptest::prelude::*;
use rand::Rng;

use entropylab::functional::{
    biconjugate, conjugate_bruteforce, conjugate_fast, default_dual_spec, fenchel_young_check, subdifferential,
    ExtendedReal, GridFunctional, GridSpec, QuadraticFunctional,
};
use entropylab::functional_entropy::{
    check_extension_principle, check_furuta_half_weight, PairAnalysis, Quadrature,
};
use entropylab::functional_means::{check_eq25, grid_arithmetic, grid_geometric, grid_harmonic, Functional};
use entropylab::harness::suites::{operator_trial, pair_trial};
use entropylab::harness::{random_convex_grid, replay, trial_rng, SuiteConfig, SuiteName};
use entropylab::matrix::{loewner_leq, matrix_fn, random_spd_with, sym_eig, Matrix, PDMatrix, SymMatrix};
use entropylab::operator_entropy::{
    check_corollary42, check_entropy_at_identity, check_entropy_bounds, check_eqp, check_furuta_skew,
};
use entropylab::operator_means::{arithmetic_mean, check_agh, check_mean_symmetry, geometric_mean, harmonic_mean};
use entropylab::Weight;

fn weight() -> impl Strategy<Value = Weight> {
    (1u32..=9).prop_map(|k| Weight::new(k as f64 / 10.0).unwrap())
}

fn spd_pair(seed: u64, dim: usize) -> (PDMatrix, PDMatrix) {
    let mut rng = trial_rng(seed, 0);
    (random_spd_with(&mut rng, dim, 100.0), random_spd_with(&mut rng, dim, 100.0))
}

fn random_sym(seed: u64, dim: usize) -> SymMatrix {
    let mut rng = trial_rng(seed, 1);
    SymMatrix::new(Matrix::from_fn(dim, |_, _| rng.random_range(-5.0..5.0)).symmetrized()).unwrap()
}

fn small_grid() -> GridSpec {
    GridSpec::new(-4.0, 4.0, 101).unwrap()
}

fn grid_from(values: Vec<f64>) -> GridFunctional {
    let spec = GridSpec::new(-4.0, 4.0, values.len()).unwrap();
    GridFunctional::new(spec, values.into_iter().map(ExtendedReal::Finite).collect()).unwrap()
}

fn finite(v: ExtendedReal) -> f64 {
    v.finite().expect("finite value")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_round_trip(seed in any::<u64>(), dim in 1usize..=8) {
        let m = random_sym(seed, dim);
        let eig = sym_eig(&m).unwrap();
        prop_assert!(eig.reconstruction_error(m.matrix()) <= 1e-10 * (1.0 + m.frobenius_norm()));
    }

    #[test]
    fn exp_then_log_is_identity(seed in any::<u64>(), dim in 1usize..=8) {
        let (a, _) = spd_pair(seed, dim);
        let e = PDMatrix::new(matrix_fn(&a, f64::exp).unwrap()).unwrap();
        let back = matrix_fn(&e, f64::ln).unwrap();
        prop_assert!(back.sub(a.as_sym()).frobenius_norm() <= 1e-8);
    }

    #[test]
    fn loewner_reflexive_and_antisymmetric(seed in any::<u64>(), dim in 1usize..=8, k in 0usize..3) {
        let (a, _) = spd_pair(seed, dim);
        let refl = loewner_leq(a.as_sym(), a.as_sym(), 0.0).unwrap();
        prop_assert!(refl.margin >= -1e-12 * refl.scale);
        let delta = [0.0, 1e-13, 1e-3][k];
        let y = a.as_sym().add(&random_sym(seed, dim).scale(delta));
        let tol = 1e-9;
        let (up, down) = (loewner_leq(a.as_sym(), &y, tol).unwrap(), loewner_leq(&y, a.as_sym(), tol).unwrap());
        if up.pass && down.pass {
            let spread = y.sub(a.as_sym()).eig().unwrap().eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            prop_assert!(spread <= tol * up.scale);
        }
    }

    #[test]
    fn means_hit_endpoints_exactly(seed in any::<u64>(), dim in 1usize..=8) {
        let (a, b) = spd_pair(seed, dim);
        for mean in [arithmetic_mean, harmonic_mean, geometric_mean] {
            prop_assert!(mean(&a, &b, Weight::ZERO).unwrap().matrix() == a.matrix());
            prop_assert!(mean(&a, &b, Weight::ONE).unwrap().matrix() == b.matrix());
        }
    }

    #[test]
    fn means_are_idempotent(seed in any::<u64>(), dim in 1usize..=8, p in weight()) {
        let (a, _) = spd_pair(seed, dim);
        for mean in [arithmetic_mean, harmonic_mean, geometric_mean] {
            let m = mean(&a, &a, p).unwrap();
            prop_assert!(m.as_sym().sub(a.as_sym()).frobenius_norm() <= 1e-10 * a.as_sym().frobenius_norm());
        }
    }

    #[test]
    fn operator_identities_and_orders(seed in any::<u64>(), dim in 1usize..=8, p in weight()) {
        let (a, b) = spd_pair(seed, dim);
        for rec in [
            check_mean_symmetry(&a, &b, p, 1e-9).unwrap(),
            check_agh(&a, &b, p, 1e-8).unwrap(),
            check_eqp(&a, &b, p, 1e-9).unwrap(),
            check_furuta_skew(&a, &b, p, 1e-9).unwrap(),
            check_entropy_bounds(&a, &b, 1e-8).unwrap(),
            check_corollary42(&a, &b, p, 1e-8).unwrap(),
            check_entropy_at_identity(&a, 1e-9).unwrap(),
        ] {
            prop_assert!(rec.pass, "{}", rec.summary());
        }
    }

    #[test]
    fn conjugation_reverses_order(f in prop::collection::vec(-5.0..5.0f64, 41), bump in prop::collection::vec(0.0..2.0f64, 41)) {
        let g: Vec<f64> = f.iter().zip(&bump).map(|(a, b)| a + b).collect();
        let (f, g) = (grid_from(f), grid_from(g));
        let dual = default_dual_spec(&f);
        let (fs, gs) = (conjugate_fast(&f, &dual), conjugate_fast(&g, &dual));
        for (a, b) in gs.values().iter().zip(fs.values()) {
            prop_assert!(finite(*a) <= finite(*b) + 1e-12);
        }
    }

    #[test]
    fn conjugates_are_convex(f in prop::collection::vec(-5.0..5.0f64, 2..60)) {
        let f = grid_from(f);
        let fs = conjugate_fast(&f, &default_dual_spec(&f));
        let ys: Vec<f64> = fs.values().iter().map(|v| finite(*v)).collect();
        let h = fs.step();
        let scale = 1.0 + ys.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for w in ys.windows(3) {
            prop_assert!((w[2] - w[1]) / h >= (w[1] - w[0]) / h - 1e-9 * scale / h);
        }
    }

    #[test]
    fn conjugate_is_subadditive(
        f in prop::collection::vec(-5.0..5.0f64, 41),
        g in prop::collection::vec(-5.0..5.0f64, 41),
        p in weight(),
    ) {
        let (f, g) = (grid_from(f), grid_from(g));
        let mix = grid_arithmetic(&f, &g, p).unwrap();
        let dual = default_dual_spec(&f);
        let (ms, fs, gs) = (conjugate_fast(&mix, &dual), conjugate_fast(&f, &dual), conjugate_fast(&g, &dual));
        let pv = p.value();
        for i in 0..dual.n {
            let rhs = (1.0 - pv) * finite(fs.value(i)) + pv * finite(gs.value(i));
            prop_assert!(finite(ms.value(i)) <= rhs + 1e-9);
        }
    }

    #[test]
    fn biconjugate_and_bruteforce(f in prop::collection::vec(-5.0..5.0f64, 2..80)) {
        let f = grid_from(f);
        let ff = biconjugate(&f);
        for (a, b) in ff.values().iter().zip(f.values()) {
            prop_assert!(finite(*a) <= finite(*b) + 1e-12);
        }
        let dual = default_dual_spec(&f);
        let (fast, brute) = (conjugate_fast(&f, &dual), conjugate_bruteforce(&f, &dual));
        for (a, b) in fast.values().iter().zip(brute.values()) {
            prop_assert!((finite(*a) - finite(*b)).abs() <= 1e-12 * (1.0 + finite(*b).abs()));
        }
    }

    #[test]
    fn convex_functionals_are_their_biconjugate(seed in any::<u64>(), restrict in any::<bool>()) {
        let f = random_convex_grid(&mut trial_rng(seed, 0), small_grid(), restrict);
        for (a, b) in biconjugate(&f).values().iter().zip(f.values()) {
            match (a.finite(), b.finite()) {
                (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs())),
                (None, None) => {}
                _ => prop_assert!(false, "domains differ"),
            }
        }
    }

    #[test]
    fn fenchel_young(f in prop::collection::vec(-5.0..5.0f64, 3..60), pick in 0.0..1.0f64, s in -20.0..20.0f64) {
        let f = grid_from(f);
        let i = 1 + ((f.len() - 2) as f64 * pick) as usize;
        let i = i.min(f.len() - 2);
        let rec = fenchel_young_check(&f, i, s).unwrap();
        prop_assert!(rec.margin("gap").unwrap().passes());
        let sub = subdifferential(&f, i);
        if !sub.empty {
            let mid = 0.5 * (sub.lo + sub.hi);
            let rec = fenchel_young_check(&f, i, mid).unwrap();
            prop_assert!(rec.pass, "{}", rec.summary());
        }
    }

    #[test]
    fn functional_means_hit_endpoints_exactly(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let f = random_convex_grid(&mut rng, small_grid(), false);
        let g = random_convex_grid(&mut rng, small_grid(), true);
        for (w, want) in [(Weight::ZERO, &f), (Weight::ONE, &g)] {
            prop_assert_eq!(&grid_harmonic(&f, &g, w).unwrap(), want);
            prop_assert_eq!(&grid_geometric(&f, &g, w, 64).unwrap(), want);
            prop_assert_eq!(&grid_arithmetic(&f, &g, w).unwrap(), want);
        }
    }

    #[test]
    fn quadratic_means_match_matrix_means(seed in any::<u64>(), dim in 1usize..=8, p in weight()) {
        let (a, b) = spd_pair(seed, dim);
        let (fa, fb) = (QuadraticFunctional::from_pd(&a), QuadraticFunctional::from_pd(&b));
        let rel = |x: &SymMatrix, y: &SymMatrix| x.sub(y).frobenius_norm() / y.frobenius_norm();
        let h = fa.harmonic(&fb, p).unwrap();
        prop_assert!(rel(h.matrix(), harmonic_mean(&a, &b, p).unwrap().as_sym()) <= 1e-9);
        let g = fa.geometric(&fb, p, 64).unwrap();
        prop_assert!(rel(g.matrix(), geometric_mean(&a, &b, p).unwrap().as_sym()) <= 1e-9);
        prop_assert!(check_eq25(&fa, &fb, p, 64, 1e-8).unwrap().pass);
    }

    #[test]
    fn extension_principle(seed in any::<u64>(), dim in 1usize..=8, p in weight()) {
        let (a, b) = spd_pair(seed, dim);
        let rec = check_extension_principle(&a, &b, p, 256, 1e-9).unwrap();
        prop_assert!(rec.pass, "{}", rec.summary());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn grid_pair_inequalities(seed in any::<u64>(), t in 0u64..4, p in weight()) {
        let cfg = SuiteConfig {
            seed,
            n: 201,
            p_values: vec![p.value()],
            points_per_pair: 3,
            ..SuiteConfig::default_for(SuiteName::Functional)
        };
        for rec in pair_trial(&cfg, &[p], t).unwrap() {
            prop_assert!(rec.pass, "{}", rec.summary());
        }
    }

    #[test]
    fn half_weight_difference_form(seed in any::<u64>(), restrict in any::<bool>()) {
        let mut rng = trial_rng(seed, 0);
        let f = random_convex_grid(&mut rng, small_grid(), restrict);
        let g = random_convex_grid(&mut rng, small_grid(), restrict);
        let rec = check_furuta_half_weight(&f, &g, &Quadrature::default(), 1e-10).unwrap();
        prop_assert!(rec.pass, "{}", rec.summary());
    }

    #[test]
    fn skew_symmetry_on_finite_pairs(seed in any::<u64>(), p in weight()) {
        let mut rng = trial_rng(seed, 0);
        let f = random_convex_grid(&mut rng, small_grid(), false);
        let g = random_convex_grid(&mut rng, small_grid(), false);
        let rec = PairAnalysis::new(&f, &g, p, Quadrature::default(), 10.0).unwrap().check_prop41().unwrap();
        prop_assert!(rec.pass, "{}", rec.summary());
    }

    #[test]
    fn trials_are_deterministic_and_replayable(seed in any::<u64>(), t in 0u64..50) {
        let cfg = SuiteConfig {
            seed,
            p_values: vec![0.0, 0.3, 1.0],
            ..SuiteConfig::default_for(SuiteName::Operator)
        };
        let ps: Vec<Weight> = cfg.p_values.iter().map(|&p| Weight::new(p).unwrap()).collect();
        let first = operator_trial(&cfg, &ps, t).unwrap();
        prop_assert_eq!(&first, &operator_trial(&cfg, &ps, t).unwrap());
        for rec in &first {
            let text = serde_json::to_string(rec).unwrap();
            let back: entropylab::record::VerificationRecord = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&replay(&back).unwrap().margins, &rec.margins);
        }
    }
}
