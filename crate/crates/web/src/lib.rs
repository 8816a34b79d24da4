//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes plain numbers and returns a JSON string. The `*_json`
//! functions do the work and are usable from native code and tests.

use serde::Serialize;
use tradeoff_core::adversary_sim::{run_experiment, ExperimentConfig, PerturbationSpec};
use tradeoff_core::boundary_solver::{ml_boundaries, optimal_linear_boundary};
use tradeoff_core::tradeoff::{
    eta_grid, general_curve, linear_curve, ml_curve, y_grid, zeta_grid, GeneralSolverConfig, TradeoffCurve,
};
use tradeoff_core::{ClassifierSpec, HypothesisPair, Norm};
use wasm_bindgen::prelude::*;

type Res<T> = Result<T, String>;

fn pair(mu0: f64, sigma0: f64, mu1: f64, sigma1: f64, p0: f64) -> Res<HypothesisPair> {
    let g = |m, s| tradeoff_core::DensityModel::gaussian(m, s);
    HypothesisPair::new(g(mu0, sigma0).map_err(e)?, g(mu1, sigma1).map_err(e)?, p0).map_err(e)
}

fn e(err: impl std::fmt::Display) -> String {
    err.to_string()
}

fn to_json<T: Serialize>(v: &T) -> Res<String> {
    serde_json::to_string(v).map_err(e)
}

fn parse_norm(norm: &str) -> Res<Norm> {
    match norm {
        "inf" => Ok(Norm::Inf),
        "two" => Ok(Norm::Two),
        _ => Err(format!("unknown norm `{norm}`")),
    }
}

#[derive(Serialize)]
struct BoundaryView {
    roots: Vec<f64>,
    orientation: tradeoff_core::Orientation,
    accuracy: f64,
    sensitivity_inf: f64,
    sensitivity_two: f64,
    gradient: Vec<f64>,
    xs: Vec<f64>,
    /// `p0 f0(x)` and `p1 f1(x)` on `xs`.
    weighted_f0: Vec<f64>,
    weighted_f1: Vec<f64>,
}

pub fn boundaries_json(mu0: f64, sigma0: f64, mu1: f64, sigma1: f64, p0: f64, eta: f64) -> Res<String> {
    let p = pair(mu0, sigma0, mu1, sigma1, p0)?;
    let report = ml_boundaries(&p, eta).map_err(e)?;
    let spec = ClassifierSpec::ml(eta).and_then(|c| c.resolve(&p)).map_err(e)?;
    let lo = (mu0 - 4.0 * sigma0).min(mu1 - 4.0 * sigma1);
    let hi = (mu0 + 4.0 * sigma0).max(mu1 + 4.0 * sigma1);
    let xs: Vec<f64> = (0..400).map(|k| lo + (hi - lo) * k as f64 / 399.0).collect();
    to_json(&BoundaryView {
        roots: report.roots.clone(),
        orientation: report.orientation,
        accuracy: spec.accuracy(&p).map_err(e)?,
        sensitivity_inf: spec.sensitivity(&p, Norm::Inf).map_err(e)?,
        sensitivity_two: spec.sensitivity(&p, Norm::Two).map_err(e)?,
        gradient: spec.accuracy_gradient(&p).map_err(e)?,
        weighted_f0: xs.iter().map(|&x| p.p0() * p.h0().pdf(x)).collect(),
        weighted_f1: xs.iter().map(|&x| p.p1() * p.h1().pdf(x)).collect(),
        xs,
    })
}

#[derive(Serialize)]
struct CurvesView {
    ml: Vec<(f64, f64)>,
    linear: Vec<(f64, f64)>,
    general: Vec<(f64, f64)>,
    /// The `eta = 1` point and the best single threshold.
    ml_optimum: (f64, f64),
    linear_optimum: Option<(f64, f64)>,
    omitted: usize,
}

fn points(c: &TradeoffCurve) -> Vec<(f64, f64)> {
    c.points.iter().map(|p| (p.accuracy, p.sensitivity)).collect()
}

#[allow(clippy::too_many_arguments)]
pub fn curves_json(
    mu0: f64,
    sigma0: f64,
    mu1: f64,
    sigma1: f64,
    p0: f64,
    norm: &str,
    zeta_steps: usize,
    grid: usize,
) -> Res<String> {
    let p = pair(mu0, sigma0, mu1, sigma1, p0)?;
    let norm = parse_norm(norm)?;
    let ml = ml_curve(&p, &eta_grid(200).map_err(e)?, norm).map_err(e)?;
    let linear = linear_curve(&p, &y_grid(&p, 1001).map_err(e)?, norm).map_err(e)?;
    let cfg = GeneralSolverConfig {
        grid,
        ..GeneralSolverConfig::default()
    };
    let general = general_curve(&p, &zeta_grid(&p, zeta_steps).map_err(e)?, 2, norm, cfg).map_err(e)?;
    let opt = ClassifierSpec::ml(1.0).and_then(|c| c.resolve(&p)).map_err(e)?;
    let linear_optimum = match optimal_linear_boundary(&p) {
        Ok(l) => {
            let spec = ClassifierSpec::Linear {
                y: l.y,
                orientation: l.orientation,
            };
            Some((l.accuracy, spec.sensitivity(&p, norm).map_err(e)?))
        }
        Err(_) => None,
    };
    to_json(&CurvesView {
        ml: points(&ml),
        linear: points(&linear),
        general: points(&general),
        ml_optimum: (opt.accuracy(&p).map_err(e)?, opt.sensitivity(&p, norm).map_err(e)?),
        linear_optimum,
        omitted: general.omitted.len(),
    })
}

#[derive(Serialize)]
struct SimulationView {
    mean_accuracy: f64,
    std_accuracy: f64,
    analytic_accuracy: f64,
    standard_error: f64,
    z_score: f64,
    nominal_accuracy: f64,
    per_trial_accuracy: Vec<f64>,
}

#[allow(clippy::too_many_arguments)]
pub fn simulate_json(
    mu0: f64,
    sigma0: f64,
    mu1: f64,
    sigma1: f64,
    p0: f64,
    eta: f64,
    shift: [f64; 4],
    n_obs: usize,
    n_trials: usize,
    seed: u64,
) -> Res<String> {
    let p = pair(mu0, sigma0, mu1, sigma1, p0)?;
    let spec = ClassifierSpec::ml(eta).map_err(e)?;
    let pert = PerturbationSpec {
        mu_bar_0: shift[0],
        sigma_bar_0: shift[1],
        mu_bar_1: shift[2],
        sigma_bar_1: shift[3],
    };
    let cfg = ExperimentConfig {
        n_obs,
        n_trials,
        base_seed: seed,
    };
    let r = run_experiment(&p, &spec, &pert, &cfg).map_err(e)?;
    to_json(&SimulationView {
        mean_accuracy: r.mean_accuracy,
        std_accuracy: r.std_accuracy,
        analytic_accuracy: r.analytic_accuracy,
        standard_error: r.standard_error,
        z_score: r.z_score(),
        nominal_accuracy: r.classifier.accuracy(&p).map_err(e)?,
        per_trial_accuracy: r.per_trial_accuracy,
    })
}

fn js(r: Res<String>) -> Result<String, JsError> {
    r.map_err(|m| JsError::new(&m))
}

/// ML boundaries, accuracy, sensitivities and the weighted densities.
#[wasm_bindgen]
pub fn boundaries(mu0: f64, sigma0: f64, mu1: f64, sigma1: f64, p0: f64, eta: f64) -> Result<String, JsError> {
    js(boundaries_json(mu0, sigma0, mu1, sigma1, p0, eta))
}

/// ML, linear and two-boundary general tradeoff curves.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn curves(
    mu0: f64,
    sigma0: f64,
    mu1: f64,
    sigma1: f64,
    p0: f64,
    norm: &str,
    zeta_steps: usize,
    grid: usize,
) -> Result<String, JsError> {
    js(curves_json(mu0, sigma0, mu1, sigma1, p0, norm, zeta_steps, grid))
}

/// Monte Carlo accuracy of the ML classifier after the parameter shift
/// `(mu_bar_0, sigma_bar_0, mu_bar_1, sigma_bar_1)`.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn simulate(
    mu0: f64,
    sigma0: f64,
    mu1: f64,
    sigma1: f64,
    p0: f64,
    eta: f64,
    mu_bar_0: f64,
    sigma_bar_0: f64,
    mu_bar_1: f64,
    sigma_bar_1: f64,
    n_obs: usize,
    n_trials: usize,
    seed: u32,
) -> Result<String, JsError> {
    js(simulate_json(
        mu0,
        sigma0,
        mu1,
        sigma1,
        p0,
        eta,
        [mu_bar_0, sigma_bar_0, mu_bar_1, sigma_bar_1],
        n_obs,
        n_trials,
        seed as u64,
    ))
}
