//! Parameter design: choose the density parameters inside an admissible set
//! so that the maximum-likelihood classifier reaches a prescribed accuracy
//! `gamma` with the smallest sensitivity.
//!
//! Also holds the closed-form accuracy and sensitivity of the equal-variance
//! Gaussian and the exponential testing problems.

use serde::{Deserialize, Serialize};

use crate::boundary_solver::ml_boundaries;
use crate::classifier::{accuracy, accuracy_gradient, sensitivity, BoundarySet, Norm};
use crate::densities::{std_normal_cdf, std_normal_pdf, HypothesisPair};
use crate::error::{Error, Result};
use crate::numeric::{lowdisc::halton, root, simplex};

/// `coeffs · θ <= upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearConstraint {
    pub coeffs: Vec<f64>,
    pub upper: f64,
}

impl LinearConstraint {
    fn violation(&self, theta: &[f64]) -> f64 {
        let v: f64 = self.coeffs.iter().zip(theta).map(|(c, t)| c * t).sum();
        (v - self.upper).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamDesignProblem {
    /// Families and prior; its parameters are ignored.
    pub template: HypothesisPair,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub constraints: Vec<LinearConstraint>,
    pub gamma: f64,
    pub norm: Norm,
}

impl ParamDesignProblem {
    /// Two Gaussians with equal priors, `μ0, μ1 ∈ [-20, 20]`,
    /// `0.1 <= σ1 <= σ0 <= 15` and `|μ0 - μ1| <= 40`.
    pub fn fig3(gamma: f64, norm: Norm) -> Self {
        Self {
            template: HypothesisPair::gaussian(0.0, 1.0, 1.0, 1.0).expect("valid"),
            lower: vec![-20.0, 0.1, -20.0, 0.1],
            upper: vec![20.0, 15.0, 20.0, 15.0],
            constraints: vec![
                LinearConstraint {
                    coeffs: vec![0.0, -1.0, 0.0, 1.0],
                    upper: 0.0,
                },
                LinearConstraint {
                    coeffs: vec![1.0, 0.0, -1.0, 0.0],
                    upper: 40.0,
                },
                LinearConstraint {
                    coeffs: vec![-1.0, 0.0, 1.0, 0.0],
                    upper: 40.0,
                },
            ],
            gamma,
            norm,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.template.n_theta();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::InvalidParameter(format!("box must have {n} components")));
        }
        if self.lower.iter().zip(&self.upper).any(|(l, u)| !(l <= u) || !l.is_finite() || !u.is_finite()) {
            return Err(Error::InvalidParameter("box is empty or unbounded".into()));
        }
        if self.constraints.iter().any(|c| c.coeffs.len() != n) {
            return Err(Error::InvalidParameter(format!("constraints must have {n} coefficients")));
        }
        if !(0.5..=1.0).contains(&self.gamma) {
            return Err(Error::InvalidParameter(format!("gamma must lie in [0.5, 1], got {}", self.gamma)));
        }
        Ok(())
    }

    fn clamp(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(v, (l, u))| v.clamp(*l, *u))
            .collect()
    }

    fn violation(&self, theta: &[f64]) -> f64 {
        self.constraints.iter().map(|c| c.violation(theta)).sum()
    }

    /// Alternating projection onto the constraint half-spaces and the box.
    fn make_admissible(&self, x: &[f64]) -> Vec<f64> {
        let mut t = self.clamp(x);
        for _ in 0..50 {
            if self.violation(&t) == 0.0 {
                break;
            }
            for c in &self.constraints {
                let v = c.violation(&t);
                if v > 0.0 {
                    let nn: f64 = c.coeffs.iter().map(|a| a * a).sum();
                    for (ti, ci) in t.iter_mut().zip(&c.coeffs) {
                        *ti -= v * ci / nn;
                    }
                }
            }
            t = self.clamp(&t);
        }
        t
    }

    fn admissible(&self, t: &[f64]) -> bool {
        t.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (l, u))| (l..=u).contains(&v))
            && self.violation(t) <= 1e-12
    }

    /// Accuracy, sensitivity and boundaries of the `eta = 1` classifier at `θ`.
    pub fn evaluate(&self, theta: &[f64]) -> Result<(f64, f64, BoundarySet)> {
        let pair = self.template.with_theta(theta)?;
        let b = ml_boundaries(&pair, 1.0)?.boundary_set();
        Ok((accuracy(&b, &pair), sensitivity(&b, &pair, self.norm)?, b))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignConfig {
    pub restarts: usize,
    pub rho_schedule: Vec<f64>,
    pub max_evals: usize,
    pub accuracy_tol: f64,
    /// First index into the Halton sequence used for start points.
    pub halton_offset: u64,
}

impl Default for DesignConfig {
    fn default() -> Self {
        Self {
            restarts: 30,
            rho_schedule: vec![1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8],
            max_evals: 1500,
            accuracy_tol: 1e-5,
            halton_offset: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartOutcome {
    pub index: usize,
    pub start: Vec<f64>,
    pub theta: Vec<f64>,
    pub accuracy: f64,
    pub sensitivity: f64,
    pub feasible: bool,
    /// The unconstrained optimum left the admissible set and was projected back.
    pub clamped: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignResult {
    pub gamma: f64,
    pub theta_star: Vec<f64>,
    pub sensitivity_star: f64,
    pub accuracy: f64,
    pub boundaries: BoundarySet,
    pub best_restart: usize,
    pub max_accuracy: f64,
    pub restarts: Vec<RestartOutcome>,
}

fn box_point(problem: &ParamDesignProblem, u: &[f64]) -> Vec<f64> {
    problem
        .lower
        .iter()
        .zip(&problem.upper)
        .zip(u)
        .map(|((l, h), t)| l + t * (h - l))
        .collect()
}

fn simplex_opts(problem: &ParamDesignProblem, max_evals: usize) -> simplex::SimplexOptions {
    simplex::SimplexOptions {
        initial_step: problem
            .lower
            .iter()
            .zip(&problem.upper)
            .map(|(l, u)| 0.1 * (u - l))
            .collect(),
        max_evals,
        f_tol: 1e-15,
        x_tol: 1e-10,
    }
}

/// Largest accuracy attainable over the admissible set, with its `θ`.
pub fn max_accuracy(problem: &ParamDesignProblem, cfg: &DesignConfig) -> Result<(f64, Vec<f64>)> {
    problem.validate()?;
    let dim = problem.lower.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for r in 0..cfg.restarts.max(1) {
        let x0 = problem.make_admissible(&box_point(problem, &halton(cfg.halton_offset + r as u64, dim)));
        let obj = |x: &[f64]| {
            let t = problem.make_admissible(x);
            let d: f64 = x.iter().zip(&t).map(|(a, b)| (a - b).powi(2)).sum();
            match problem.evaluate(&t) {
                Ok((a, _, _)) => -a + d,
                Err(_) => f64::INFINITY,
            }
        };
        let res = simplex::minimize(obj, &x0, &simplex_opts(problem, cfg.max_evals));
        let t = problem.make_admissible(&res.x);
        if let Ok((a, _, _)) = problem.evaluate(&t) {
            if best.as_ref().is_none_or(|(ba, _)| a > *ba) {
                best = Some((a, t));
            }
        }
    }
    best.ok_or_else(|| Error::Solver("accuracy could not be evaluated anywhere in the box".into()))
}

/// Moves one coordinate of `θ` other than `fixed` inside the admissible set
/// until the accuracy equals `gamma`. The coordinate with the largest
/// accuracy slope is tried first.
fn restore_accuracy(problem: &ParamDesignProblem, theta: &[f64], fixed: Option<usize>) -> Option<Vec<f64>> {
    let pair = problem.template.with_theta(theta).ok()?;
    let b = ml_boundaries(&pair, 1.0).ok()?.boundary_set();
    // the boundaries are stationary for the accuracy, so the partial
    // gradient is also the total one
    let g = accuracy_gradient(&b, &pair).ok()?;
    let mut order: Vec<usize> = (0..theta.len()).collect();
    order.sort_by(|&a, &c| g[c].abs().total_cmp(&g[a].abs()));
    let gamma = problem.gamma;
    for k in order.into_iter().filter(|&k| Some(k) != fixed) {
        let r = |t: f64| -> f64 {
            let mut v = theta.to_vec();
            v[k] = t;
            if !problem.admissible(&v) {
                return f64::NAN;
            }
            problem.evaluate(&v).map(|(a, _, _)| a - gamma).unwrap_or(f64::NAN)
        };
        let t0 = theta[k];
        let r0 = r(t0);
        if r0.is_nan() {
            continue;
        }
        if r0 == 0.0 {
            return Some(theta.to_vec());
        }
        let (lo, hi) = (problem.lower[k], problem.upper[k]);
        for dir in [1.0, -1.0] {
            let mut step = 1e-6 * (hi - lo);
            let mut prev = t0;
            while step < 2.0 * (hi - lo) {
                let t = (t0 + dir * step).clamp(lo, hi);
                let rt = r(t);
                if rt.is_nan() {
                    break;
                }
                if (rt > 0.0) != (r0 > 0.0) || rt == 0.0 {
                    let (a, b) = if prev < t { (prev, t) } else { (t, prev) };
                    let root = root::brent(r, a, b, 1e-14 * t0.abs().max(1.0), 200)?;
                    let mut v = theta.to_vec();
                    v[k] = root;
                    return Some(v);
                }
                if t == lo || t == hi {
                    break;
                }
                prev = t;
                step *= 2.0;
            }
        }
    }
    None
}

fn run_restart(problem: &ParamDesignProblem, cfg: &DesignConfig, index: usize, start: Vec<f64>) -> RestartOutcome {
    let mut x = start.clone();
    for &rho in &cfg.rho_schedule {
        let obj = |v: &[f64]| {
            let t = problem.clamp(v);
            let out: f64 = v.iter().zip(&t).map(|(a, b)| (a - b).powi(2)).sum();
            let viol = problem.violation(&t);
            match problem.evaluate(&t) {
                Ok((a, s, _)) => s + rho * ((a - problem.gamma).powi(2) + out + viol * viol),
                Err(_) => f64::INFINITY,
            }
        };
        x = simplex::minimize(obj, &x, &simplex_opts(problem, cfg.max_evals)).x;
    }
    let t = problem.make_admissible(&x);
    let clamped = x.iter().zip(&t).any(|(a, b)| (a - b).abs() > 1e-12);
    let restored = restore_accuracy(problem, &t, None);
    let theta = restored.clone().unwrap_or(t);
    match problem.evaluate(&theta) {
        Ok((a, s, _)) => RestartOutcome {
            index,
            start,
            feasible: restored.is_some()
                && (a - problem.gamma).abs() <= cfg.accuracy_tol
                && problem.admissible(&theta),
            theta,
            accuracy: a,
            sensitivity: s,
            clamped,
            error: None,
        },
        Err(e) => RestartOutcome {
            index,
            start,
            theta,
            accuracy: f64::NAN,
            sensitivity: f64::NAN,
            feasible: false,
            clamped,
            error: Some(e.to_string()),
        },
    }
}

/// Feasible pattern search: step one coordinate, restore the accuracy with
/// another, keep strict decreases.
fn polish(problem: &ParamDesignProblem, cfg: &DesignConfig, mut theta: Vec<f64>, mut s: f64) -> (Vec<f64>, f64) {
    let mut h = 1e-3;
    for _ in 0..500 {
        if h < 1e-10 {
            break;
        }
        let mut improved = false;
        'coords: for k in 0..theta.len() {
            for dir in [1.0, -1.0] {
                let mut trial = theta.clone();
                let width = problem.upper[k] - problem.lower[k];
                trial[k] = (theta[k] + dir * h * width).clamp(problem.lower[k], problem.upper[k]);
                if trial[k] == theta[k] || !problem.admissible(&trial) {
                    continue;
                }
                let Some(v) = restore_accuracy(problem, &trial, Some(k)) else {
                    continue;
                };
                if let Ok((a, sv, _)) = problem.evaluate(&v) {
                    if sv < s && (a - problem.gamma).abs() <= cfg.accuracy_tol && problem.admissible(&v) {
                        theta = v;
                        s = sv;
                        improved = true;
                        break 'coords;
                    }
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    (theta, s)
}

/// Best feasible outcome over all restarts; ties go to the lowest index.
pub fn design_params(problem: &ParamDesignProblem, cfg: &DesignConfig) -> Result<DesignResult> {
    problem.validate()?;
    let (a_max, _) = max_accuracy(problem, cfg)?;
    if problem.gamma > a_max + cfg.accuracy_tol {
        return Err(Error::InfeasibleAccuracy {
            target: problem.gamma,
            max: a_max,
        });
    }
    let dim = problem.lower.len();
    let mut starts: Vec<Vec<f64>> = (0..cfg.restarts)
        .map(|r| problem.make_admissible(&box_point(problem, &halton(cfg.halton_offset + r as u64, dim))))
        .collect();
    // identical hypotheses reach the prior accuracy with zero sensitivity
    let k = problem.template.h0().n_params();
    if k * 2 == dim {
        let centre = box_point(problem, &vec![0.5; dim]);
        let mut same = centre[..k].to_vec();
        same.extend_from_slice(&centre[..k]);
        starts.push(problem.make_admissible(&same));
    }
    let outcomes = run_all(problem, cfg, starts);
    let best = outcomes
        .iter()
        .filter(|o| o.feasible)
        .fold(None::<&RestartOutcome>, |b, o| match b {
            Some(b) if b.sensitivity <= o.sensitivity => Some(b),
            _ => Some(o),
        })
        .ok_or_else(|| Error::Solver(format!("no restart reached accuracy {}", problem.gamma)))?;
    let (theta, _) = polish(problem, cfg, best.theta.clone(), best.sensitivity);
    let (acc, s, boundaries) = problem.evaluate(&theta)?;
    Ok(DesignResult {
        gamma: problem.gamma,
        theta_star: theta,
        sensitivity_star: s,
        accuracy: acc,
        boundaries,
        best_restart: best.index,
        max_accuracy: a_max,
        restarts: outcomes,
    })
}

fn run_all(problem: &ParamDesignProblem, cfg: &DesignConfig, starts: Vec<Vec<f64>>) -> Vec<RestartOutcome> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        starts
            .into_par_iter()
            .enumerate()
            .map(|(i, s)| run_restart(problem, cfg, i, s))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        starts
            .into_iter()
            .enumerate()
            .map(|(i, s)| run_restart(problem, cfg, i, s))
            .collect()
    }
}

/// Solves the design problem for each `gamma`.
pub fn gamma_sweep(problem: &ParamDesignProblem, gammas: &[f64], cfg: &DesignConfig) -> Vec<Result<DesignResult>> {
    gammas
        .iter()
        .map(|&g| {
            let p = ParamDesignProblem {
                gamma: g,
                ..problem.clone()
            };
            design_params(&p, cfg)
        })
        .collect()
}

/// `gamma,sens_star,<θ names>` with one row per successful design.
pub fn sweep_csv(template: &HypothesisPair, results: &[DesignResult]) -> String {
    let mut out = String::from("gamma,sens_star");
    for n in template.theta_names() {
        out.push(',');
        out.push_str(&n);
    }
    out.push('\n');
    for r in results {
        out.push_str(&format!("{},{}", r.gamma, r.sensitivity_star));
        for t in &r.theta_star {
            out.push_str(&format!(",{t}"));
        }
        out.push('\n');
    }
    out
}

/// Accuracy `Φ(δμ / 2σ)` and sensitivity `φ(δμ / 2σ) / (2σ)` of the
/// equal-variance Gaussian problem with equal priors and `θ = [μ0, μ1]`.
///
/// The sensitivity is the derivative of the accuracy expression; its
/// exponent is `-δμ² / (8σ²)`.
pub fn gaussian_equal_variance_law(delta_mu: f64, sigma: f64) -> Result<(f64, f64)> {
    if !(delta_mu >= 0.0 && delta_mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta_mu must be nonnegative, got {delta_mu}")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    let z = delta_mu / (2.0 * sigma);
    Ok((std_normal_cdf(z), std_normal_pdf(z) / (2.0 * sigma)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentialLaw {
    pub accuracy: f64,
    pub sensitivity: f64,
    /// `H1` is chosen on `[0, boundary)`.
    pub boundary: f64,
}

/// Closed forms for exponential densities with rates `λ0` and `λ1 = r λ0`,
/// equal priors and `θ = λ1`.
pub fn exponential_law(r: f64, lambda0: f64) -> Result<ExponentialLaw> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("rate ratio must exceed 1, got {r}")));
    }
    if !(lambda0 > 0.0 && lambda0.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda0 must be positive, got {lambda0}")));
    }
    let lnr = r.ln();
    let rm1 = r - 1.0;
    // r^{-r/(r-1)}; ln r / (r - 1) is evaluated via ln_1p near r = 1
    let ln_ratio = if rm1 < 1e-4 { (rm1).ln_1p() / rm1 } else { lnr / rm1 };
    let pw = (-r * ln_ratio).exp();
    Ok(ExponentialLaw {
        accuracy: 0.5 + 0.5 * rm1 * pw,
        sensitivity: ln_ratio / (2.0 * lambda0) * pw,
        boundary: ln_ratio / lambda0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary_solver::{ml_boundaries_generic, SearchConfig};
    use crate::classifier::Orientation;
    use crate::densities::DensityModel;

    fn exp_pair(l0: f64, l1: f64) -> HypothesisPair {
        HypothesisPair::new(
            DensityModel::exponential(l0).unwrap(),
            DensityModel::exponential(l1).unwrap(),
            0.5,
        )
        .unwrap()
    }

    #[test]
    fn gaussian_law_examples() {
        let (a, s) = gaussian_equal_variance_law(0.0, 2.0).unwrap();
        assert_eq!(a, 0.5);
        assert!((s - 1.0 / (4.0 * (2.0 * std::f64::consts::PI).sqrt())).abs() < 1e-16);
        let (a, _) = gaussian_equal_variance_law(4.0, 2.0).unwrap();
        assert!((a - 0.841344746068542948).abs() < 1e-15);
        assert!(gaussian_equal_variance_law(-1.0, 1.0).is_err());
    }

    #[test]
    fn gaussian_law_matches_pipeline() {
        for (d, s) in [(0.5, 1.0), (3.0, 2.0), (10.0, 4.0)] {
            let pair = HypothesisPair::gaussian(1.0, s, 1.0 + d, s).unwrap();
            let b = ml_boundaries(&pair, 1.0).unwrap().boundary_set();
            let (a, sens) = gaussian_equal_variance_law(d, s).unwrap();
            assert!((accuracy(&b, &pair) - a).abs() < 1e-12);
            let h = 1e-5;
            let fd = (accuracy(&b, &HypothesisPair::gaussian(1.0, s, 1.0 + d + h, s).unwrap())
                - accuracy(&b, &HypothesisPair::gaussian(1.0, s, 1.0 + d - h, s).unwrap()))
                / (2.0 * h);
            assert!((fd.abs() - sens).abs() < 1e-8);
        }
    }

    #[test]
    fn exponential_law_examples() {
        let l = exponential_law(2.0, 1.0).unwrap();
        assert!((l.accuracy - 0.625).abs() < 1e-15);
        assert!((l.sensitivity - 0.5 * 2f64.ln() * 0.25).abs() < 1e-15);
        assert!((l.boundary - 2f64.ln()).abs() < 1e-15);
        let pair = exp_pair(1.0, 2.0);
        let b = BoundarySet::linear(l.boundary, Orientation::H1First).unwrap();
        assert!((accuracy(&b, &pair) - 0.625).abs() < 1e-15);
        let near = exponential_law(1.0 + 1e-9, 1.0).unwrap();
        assert!((near.accuracy - 0.5).abs() < 1e-8);
        assert!(exponential_law(1.0, 1.0).is_err());
    }

    #[test]
    fn exponential_law_matches_generic_pipeline() {
        for (r, l0) in [(1.3, 0.5), (2.0, 1.0), (7.5, 3.0)] {
            let law = exponential_law(r, l0).unwrap();
            let pair = exp_pair(l0, r * l0);
            let rep = ml_boundaries_generic(&pair, 1.0, SearchConfig::default()).unwrap();
            let b = rep.boundary_set();
            assert_eq!(b.orientation(), Orientation::H1First);
            assert!((accuracy(&b, &pair) - law.accuracy).abs() < 1e-10);
            let h = 1e-6 * r * l0;
            let fd = (accuracy(&b, &exp_pair(l0, r * l0 + h)) - accuracy(&b, &exp_pair(l0, r * l0 - h))) / (2.0 * h);
            assert!((fd.abs() - law.sensitivity).abs() < 1e-7);
        }
    }

    #[test]
    fn fig3_box_is_validated() {
        let p = ParamDesignProblem::fig3(0.8, Norm::Inf);
        p.validate().unwrap();
        assert!(p.admissible(&[0.0, 5.0, 10.0, 4.0]));
        assert!(!p.admissible(&[0.0, 4.0, 10.0, 5.0]));
        let fixed = p.make_admissible(&[0.0, 4.0, 10.0, 5.0]);
        assert!(p.admissible(&fixed));
        let bad = ParamDesignProblem {
            gamma: 1.2,
            ..p.clone()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn design_reaches_gamma() {
        let p = ParamDesignProblem::fig3(0.9, Norm::Inf);
        let cfg = DesignConfig {
            restarts: 6,
            ..DesignConfig::default()
        };
        let r = design_params(&p, &cfg).unwrap();
        assert!((r.accuracy - 0.9).abs() <= 1e-5);
        assert!(p.admissible(&r.theta_star));
        assert!(r.restarts.iter().any(|o| o.feasible));
    }

    #[test]
    fn design_at_prior_accuracy_is_insensitive() {
        let p = ParamDesignProblem::fig3(0.5, Norm::Inf);
        let cfg = DesignConfig {
            restarts: 2,
            ..DesignConfig::default()
        };
        let r = design_params(&p, &cfg).unwrap();
        assert!(r.sensitivity_star < 1e-6, "{}", r.sensitivity_star);
    }
}
