use proptest::prelude::*;
use std::f64::consts::PI;

use tradeoff_core::adversary_sim::{run_experiment, ExperimentConfig, PerturbationSpec};
use tradeoff_core::boundary_solver::ml_boundaries;
use tradeoff_core::classifier::{accuracy, accuracy_gradient, sensitivity};
use tradeoff_core::param_designer::{exponential_law, gaussian_equal_variance_law};
use tradeoff_core::theory_checks::{check_assumptions, theorem1_witness, CheckConfig};
use tradeoff_core::tradeoff::{GeneralSolver, GeneralSolverConfig};
use tradeoff_core::{BoundarySet, ClassifierSpec, DensityModel, HypothesisPair, Norm, Orientation};

fn gaussian_pair() -> impl Strategy<Value = HypothesisPair> {
    (-10.0..10.0, 0.5..10.0, -10.0..10.0, 0.5..10.0, 0.2..0.8)
        .prop_map(|(m0, s0, m1, s1, p0)| {
            HypothesisPair::new(
                DensityModel::gaussian(m0, s0).unwrap(),
                DensityModel::gaussian(m1, s1).unwrap(),
                p0,
            )
            .unwrap()
        })
}

fn boundary_set(max_len: usize) -> impl Strategy<Value = BoundarySet> {
    (prop::collection::vec(-30.0..30.0, 1..=max_len), any::<bool>()).prop_map(|(y, first)| {
        let o = if first { Orientation::H0First } else { Orientation::H1First };
        BoundarySet::from_unsorted(y, o).unwrap()
    })
}

fn gaussian_pdf(mu: f64, sigma: f64, x: f64) -> f64 {
    let z = (x - mu) / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + h * k as f64) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Accuracy by direct integration of the prior-weighted densities over the
/// regions assigned to each label.
fn accuracy_by_quadrature(b: &BoundarySet, pair: &HypothesisPair) -> f64 {
    let edges: Vec<f64> = std::iter::once(-200.0)
        .chain(b.boundaries().iter().copied())
        .chain(std::iter::once(200.0))
        .collect();
    let mut total = 0.0;
    for k in 0..edges.len() - 1 {
        let label = b.interval_label(k);
        let (mu, sigma) = match *pair.model(label) {
            DensityModel::Gaussian { mean, std_dev } => (mean, std_dev),
            _ => unreachable!(),
        };
        let lo = edges[k].max(mu - 14.0 * sigma);
        let hi = edges[k + 1].min(mu + 14.0 * sigma);
        total += pair.prior(label) * simpson(|x| gaussian_pdf(mu, sigma, x), lo, hi, 20_000);
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn accuracy_is_a_probability_and_flips_to_its_complement(pair in gaussian_pair(), b in boundary_set(4)) {
        let a = accuracy(&b, &pair);
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!((a + accuracy(&b.flipped(), &pair) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn accuracy_matches_direct_integration(pair in gaussian_pair(), b in boundary_set(3)) {
        let a = accuracy(&b, &pair);
        let q = accuracy_by_quadrature(&b, &pair);
        prop_assert!((a - q).abs() < 1e-9, "closed form {a}, quadrature {q}");
    }

    #[test]
    fn gradient_matches_finite_differences(pair in gaussian_pair(), b in boundary_set(3)) {
        let g = accuracy_gradient(&b, &pair).unwrap();
        let theta = pair.theta();
        for k in 0..theta.len() {
            let h = 1e-6 * theta[k].abs().max(1.0);
            let at = |d: f64| {
                let mut t = theta.clone();
                t[k] += d;
                accuracy(&b, &pair.with_theta(&t).unwrap())
            };
            let fd = (at(h) - at(-h)) / (2.0 * h);
            prop_assert!((g[k] - fd).abs() < 1e-7, "component {k}: {} vs {fd}", g[k]);
        }
    }

    #[test]
    fn norms_are_ordered(pair in gaussian_pair(), b in boundary_set(4)) {
        let inf = sensitivity(&b, &pair, Norm::Inf).unwrap();
        let two = sensitivity(&b, &pair, Norm::Two).unwrap();
        prop_assert!(inf <= two + 1e-15);
        prop_assert!(two <= 2.0 * inf + 1e-15);
    }

    #[test]
    fn ml_classifier_beats_any_other_partition(pair in gaussian_pair(), b in boundary_set(4)) {
        let ml = ml_boundaries(&pair, 1.0).unwrap().boundary_set();
        prop_assert!(accuracy(&ml, &pair) >= accuracy(&b, &pair) - 1e-12);
    }

    #[test]
    fn ml_boundaries_equalise_weighted_densities(pair in gaussian_pair(), eta in 0.05..20.0_f64) {
        let r = ml_boundaries(&pair, eta).unwrap();
        for &y in &r.roots {
            let l0 = pair.p0() * pair.h0().pdf(y);
            let l1 = pair.p1() * pair.h1().pdf(y);
            prop_assert!((l1 - eta * l0).abs() <= 1e-9 * l1.max(eta * l0).max(1e-300), "y={y}: {l1} vs {}", eta * l0);
        }
    }

    #[test]
    fn exponential_law_matches_generic_pipeline(r in 1.05..20.0_f64, l0 in 0.1..10.0_f64) {
        let law = exponential_law(r, l0).unwrap();
        let pair = HypothesisPair::new(
            DensityModel::exponential(l0).unwrap(),
            DensityModel::exponential(r * l0).unwrap(),
            0.5,
        )
        .unwrap();
        let b = ml_boundaries(&pair, 1.0).unwrap().boundary_set();
        prop_assert!((accuracy(&b, &pair) - law.accuracy).abs() < 1e-10);
        prop_assert!((accuracy_gradient(&b, &pair).unwrap()[1].abs() - law.sensitivity).abs() < 1e-9);
        prop_assert!((law.boundary - r.ln() / ((r - 1.0) * l0)).abs() < 1e-12);
    }

    #[test]
    fn gaussian_equal_variance_law_matches_pipeline(mu in -10.0..10.0_f64, dmu in 0.1..20.0_f64, sigma in 0.5..10.0_f64) {
        let (a, s) = gaussian_equal_variance_law(dmu, sigma).unwrap();
        let pair = HypothesisPair::gaussian(mu, sigma, mu + dmu, sigma).unwrap();
        let c = ClassifierSpec::ml(1.0).unwrap().resolve(&pair).unwrap();
        prop_assert!((c.accuracy(&pair).unwrap() - a).abs() < 1e-12);
        let g = c.accuracy_gradient(&pair).unwrap();
        prop_assert!((g[2] - s).abs() < 1e-10, "dA/dmu1 {} vs {s}", g[2]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn theorem1_identity_holds_where_assumptions_do(pair in gaussian_pair()) {
        let cfg = CheckConfig::default();
        let report = check_assumptions(&pair, &cfg);
        prop_assume!(report.as_ref().is_ok_and(|r| r.a1_holds && r.a2_holds));
        let w = theorem1_witness(&pair, &cfg).unwrap();
        prop_assert!(w.identity_max_error <= 1e-5, "identity error {}", w.identity_max_error);
        prop_assert!(w.gradient_norm > 1e-7);
        let d = w.descent.expect("a descent step");
        prop_assert!(d.sensitivity < w.baseline_sensitivity);
        prop_assert!(d.accuracy <= w.baseline_accuracy + 1e-12);
    }

    #[test]
    fn monte_carlo_mean_is_within_standard_errors(
        shift in (-2.0..2.0_f64, 0.0..2.0_f64, -2.0..2.0_f64, 0.0..3.0_f64),
        eta in 0.3..3.0_f64,
        seed in any::<u64>(),
    ) {
        let pair = HypothesisPair::gaussian(0.0, 9.0, 9.0, 4.0).unwrap();
        let perturbation = PerturbationSpec { mu_bar_0: shift.0, sigma_bar_0: shift.1, mu_bar_1: shift.2, sigma_bar_1: shift.3 };
        let cfg = ExperimentConfig { n_obs: 2_000, n_trials: 10, base_seed: seed };
        let r = run_experiment(&pair, &ClassifierSpec::ml(eta).unwrap(), &perturbation, &cfg).unwrap();
        prop_assert!(r.z_score().abs() < 5.0, "z = {}", r.z_score());
        prop_assert_eq!(r.per_trial_accuracy.len(), 10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn general_curve_meets_targets_and_lies_below_ml_and_linear(
        pair in gaussian_pair(),
        norm in prop_oneof![Just(Norm::Inf), Just(Norm::Two)],
        ys in prop::collection::vec(-20.0..20.0_f64, 4),
    ) {
        let cfg = GeneralSolverConfig { grid: 300, ..GeneralSolverConfig::default() };
        let solver = GeneralSolver::new(&pair, 2, norm, cfg).unwrap();
        let lo = pair.p0().max(pair.p1());
        prop_assume!(solver.a_max() > lo + 0.02);
        for k in 0..10 {
            let zeta = lo + (solver.a_max() - lo) * k as f64 / 10.0 + 1e-3;
            let q = solver.solve(zeta).unwrap();
            prop_assert!((q.accuracy - zeta).abs() <= 1e-6);
            prop_assert!(q.boundaries.len() == 2);
        }
        let mut rivals: Vec<BoundarySet> = [0.5, 0.8, 1.25, 2.0]
            .iter()
            .filter_map(|&eta| ml_boundaries(&pair, eta).ok())
            .map(|r| r.boundary_set())
            .filter(|b| (1..=2).contains(&b.len()))
            .collect();
        for &y in &ys {
            for o in [Orientation::H0First, Orientation::H1First] {
                rivals.push(BoundarySet::linear(y, o).unwrap());
            }
        }
        for b in rivals {
            let a = accuracy(&b, &pair);
            if a > lo && a < solver.a_max() {
                let q = solver.solve(a).unwrap();
                let s = sensitivity(&b, &pair, norm).unwrap();
                prop_assert!(q.sensitivity <= s + 1e-6, "at accuracy {a}: {} above {s} for {b:?}", q.sensitivity);
            }
        }
    }
}
