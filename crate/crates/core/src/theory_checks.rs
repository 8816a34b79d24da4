//! Numerical checks of the conditions under which the maximum-accuracy
//! classifier has a nonzero sensitivity gradient.
//!
//! - A1: the accuracy gradient at the `eta = 1` boundaries `y*` has a unique
//!   largest absolute element, at index `j`.
//! - A2: some boundary moves with `θ_j`, weighted by `w_i(y_i*)`.
//! - A3: `∂y/∂eta` at `eta = 1` is not orthogonal to `∂S/∂y` at `y*`.
//!
//! Boundary responses to `θ` and `eta` are obtained by re-solving the
//! likelihood-ratio equation at perturbed inputs.

use serde::Serialize;

use crate::boundary_solver::ml_boundaries;
use crate::classifier::{
    accuracy, accuracy_gradient, boundary_curvature, gradient_boundary_jacobian, sensitivity,
    BoundarySet, Norm,
};
use crate::densities::HypothesisPair;
use crate::error::{Error, Result};

/// Step sizes and decision thresholds. Every report carries a copy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckConfig {
    /// A1 holds when the gap between the two largest |gradient| entries exceeds this.
    pub a1_tol: f64,
    /// Gaps at or below `a1_tie_rel * max|g|` are reported as exact ties.
    pub a1_tie_rel: f64,
    /// Step for re-solving the boundaries at `θ ± h e_j`.
    pub theta_step: f64,
    /// Step for re-solving the boundaries at `eta = 1 ± h`.
    pub eta_step: f64,
    /// Relative step for differentiating the sensitivity in `y`.
    pub y_step: f64,
    pub a2_threshold: f64,
    pub a3_threshold: f64,
    pub gradient_threshold: f64,
    pub identity_tol: f64,
    pub norm: Norm,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            a1_tol: 1e-6,
            a1_tie_rel: 1e-9,
            theta_step: 1e-5,
            eta_step: 1e-5,
            y_step: 1e-6,
            a2_threshold: 1e-8,
            a3_threshold: 1e-8,
            gradient_threshold: 1e-7,
            identity_tol: 1e-5,
            norm: Norm::Inf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum A1Status {
    Holds,
    /// Largest two entries differ by less than the tolerance.
    Fragile,
    /// Largest two entries agree to rounding.
    Tied,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct A1Result {
    pub holds: bool,
    pub status: A1Status,
    pub gap: f64,
    pub index_j: usize,
    /// Indices whose magnitude is within the tolerance of the largest.
    pub max_indices: Vec<usize>,
    pub gradient: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct A2Result {
    pub holds: bool,
    /// Boundary with the largest `|w_i ∂y_i*/∂θ_j|`.
    pub witness_index: usize,
    pub witness_value: f64,
    /// `w_i(y_i*) ∂y_i*/∂θ_j` for every boundary.
    pub products: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct A3Result {
    pub holds: bool,
    pub inner_product: f64,
    pub dy_deta: Vec<f64>,
    pub sensitivity_gradient: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub boundaries: BoundarySet,
    pub a1_holds: bool,
    pub a1_status: A1Status,
    pub a1_gap: f64,
    pub a1_index_j: usize,
    pub accuracy_gradient: Vec<f64>,
    pub a2_holds: bool,
    pub a2_witness_index: usize,
    pub a2_witness_value: f64,
    pub a3_holds: bool,
    pub a3_inner_product: f64,
    pub sensitivity_gradient_at_opt: Vec<f64>,
    pub config: CheckConfig,
}

/// Descent step found from `y*` along `-∂S/∂y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescentStep {
    pub step: f64,
    pub boundaries: Vec<f64>,
    pub sensitivity: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Witness {
    pub norm: Norm,
    pub sensitivity_gradient: Vec<f64>,
    pub gradient_norm: f64,
    pub nonzero: bool,
    /// Set for the Inf norm when A1 fails: the sensitivity is not
    /// differentiable at `y*` and no verdict is drawn.
    pub withheld: bool,
    /// `∂/∂y_i ∂A/∂θ_j` at `y*`, analytic.
    pub identity_lhs: Vec<Vec<f64>>,
    /// `-w_i ∂y_i*/∂θ_j`, with the boundary response from re-solving.
    pub identity_rhs: Vec<Vec<f64>>,
    pub identity_max_error: f64,
    pub identity_holds: bool,
    pub baseline_sensitivity: f64,
    pub baseline_accuracy: f64,
    pub descent: Option<DescentStep>,
}

fn optimum(pair: &HypothesisPair) -> Result<BoundarySet> {
    let b = ml_boundaries(pair, 1.0)?.boundary_set();
    if b.is_empty() {
        return Err(Error::NoRoot);
    }
    Ok(b)
}

/// Re-solved roots matched to `nominal` by proximity. Perturbing an equal
/// variance pair can bring in a second root from far away; it is ignored.
fn resolve_roots(pair: &HypothesisPair, eta: f64, nominal: &[f64]) -> Result<Vec<f64>> {
    let roots = ml_boundaries(pair, eta)?.roots;
    if roots.len() < nominal.len() {
        return Err(Error::Solver(format!(
            "boundary count dropped from {} to {} under perturbation",
            nominal.len(),
            roots.len()
        )));
    }
    Ok(nominal
        .iter()
        .map(|y| {
            *roots
                .iter()
                .min_by(|a, b| (*a - y).abs().total_cmp(&(*b - y).abs()))
                .expect("at least one root")
        })
        .collect())
}

/// `∂y*/∂θ_j` for every boundary by central differences of re-solved roots.
pub fn boundary_theta_response(pair: &HypothesisPair, j: usize, h: f64) -> Result<Vec<f64>> {
    let y = optimum(pair)?;
    let theta = pair.theta();
    if j >= theta.len() {
        return Err(Error::InvalidParameter(format!("parameter index {j} out of range")));
    }
    let mut tp = theta.clone();
    let mut tm = theta;
    tp[j] += h;
    tm[j] -= h;
    let rp = resolve_roots(&pair.with_theta(&tp)?, 1.0, y.boundaries())?;
    let rm = resolve_roots(&pair.with_theta(&tm)?, 1.0, y.boundaries())?;
    Ok(rp.iter().zip(&rm).map(|(a, b)| (a - b) / (2.0 * h)).collect())
}

/// `∂y/∂eta` at `eta = 1` by central differences of re-solved roots.
pub fn boundary_eta_response(pair: &HypothesisPair, h: f64) -> Result<Vec<f64>> {
    let y = optimum(pair)?;
    let rp = resolve_roots(pair, 1.0 + h, y.boundaries())?;
    let rm = resolve_roots(pair, 1.0 - h, y.boundaries())?;
    Ok(rp.iter().zip(&rm).map(|(a, b)| (a - b) / (2.0 * h)).collect())
}

fn argmax_abs(v: &[f64]) -> usize {
    let mut best = 0;
    for (k, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = k;
        }
    }
    best
}

fn a1_from_gradient(g: Vec<f64>, cfg: &CheckConfig) -> A1Result {
    let j = argmax_abs(&g);
    let top = g[j].abs();
    let second = g
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != j)
        .fold(0.0_f64, |m, (_, x)| m.max(x.abs()));
    let gap = top - second;
    let status = if gap <= cfg.a1_tie_rel * top {
        A1Status::Tied
    } else if gap <= cfg.a1_tol {
        A1Status::Fragile
    } else {
        A1Status::Holds
    };
    let max_indices = g
        .iter()
        .enumerate()
        .filter(|(_, x)| top - x.abs() <= cfg.a1_tol)
        .map(|(k, _)| k)
        .collect();
    A1Result {
        holds: status == A1Status::Holds,
        status,
        gap,
        index_j: j,
        max_indices,
        gradient: g,
    }
}

/// Assumption A1 at the `eta = 1` boundaries.
pub fn check_a1(pair: &HypothesisPair, cfg: &CheckConfig) -> Result<A1Result> {
    let b = optimum(pair)?;
    Ok(a1_from_gradient(accuracy_gradient(&b, pair)?, cfg))
}

/// Assumption A2 for parameter index `j`.
pub fn check_a2(pair: &HypothesisPair, j: usize, cfg: &CheckConfig) -> Result<A2Result> {
    let b = optimum(pair)?;
    let w = boundary_curvature(&b, pair);
    let dy = boundary_theta_response(pair, j, cfg.theta_step)?;
    let products: Vec<f64> = w.iter().zip(&dy).map(|(a, b)| a * b).collect();
    let witness_index = argmax_abs(&products);
    let witness_value = products[witness_index];
    Ok(A2Result {
        holds: witness_value.abs() > cfg.a2_threshold,
        witness_index,
        witness_value,
        products,
    })
}

/// `∂S/∂y` by finite differences. For the Inf norm a side of the stencil
/// whose largest gradient index differs from the centre's is dropped in
/// favour of a one-sided difference.
pub fn sensitivity_boundary_gradient(
    b: &BoundarySet,
    pair: &HypothesisPair,
    norm: Norm,
    rel_step: f64,
) -> Result<Vec<f64>> {
    let y = b.boundaries();
    let centre_grad = accuracy_gradient(b, pair)?;
    let j0 = argmax_abs(&centre_grad);
    let s0 = norm.apply(&centre_grad);
    let mut out = Vec::with_capacity(y.len());
    for i in 0..y.len() {
        let h = rel_step * y[i].abs().max(1.0);
        let eval = |d: f64| -> Result<(f64, usize)> {
            let mut v = y.to_vec();
            v[i] += d;
            let bs = BoundarySet::from_unsorted(v, b.orientation())?;
            let g = accuracy_gradient(&bs, pair)?;
            Ok((norm.apply(&g), argmax_abs(&g)))
        };
        let (sp, jp) = eval(h)?;
        let (sm, jm) = eval(-h)?;
        let d = match norm {
            Norm::Two => (sp - sm) / (2.0 * h),
            Norm::Inf => match (jp == j0, jm == j0) {
                (true, true) | (false, false) => (sp - sm) / (2.0 * h),
                (true, false) => (sp - s0) / h,
                (false, true) => (s0 - sm) / h,
            },
        };
        out.push(d);
    }
    Ok(out)
}

/// Assumption A3.
pub fn check_a3(pair: &HypothesisPair, cfg: &CheckConfig) -> Result<A3Result> {
    let b = optimum(pair)?;
    let dy_deta = boundary_eta_response(pair, cfg.eta_step)?;
    let sensitivity_gradient = sensitivity_boundary_gradient(&b, pair, cfg.norm, cfg.y_step)?;
    let inner_product = dy_deta.iter().zip(&sensitivity_gradient).map(|(a, b)| a * b).sum::<f64>();
    Ok(A3Result {
        holds: inner_product.abs() > cfg.a3_threshold,
        inner_product,
        dy_deta,
        sensitivity_gradient,
    })
}

/// All three assumptions in one report.
pub fn check_assumptions(pair: &HypothesisPair, cfg: &CheckConfig) -> Result<AssumptionReport> {
    let boundaries = optimum(pair)?;
    let a1 = check_a1(pair, cfg)?;
    let a2 = check_a2(pair, a1.index_j, cfg)?;
    let a3 = check_a3(pair, cfg)?;
    Ok(AssumptionReport {
        boundaries,
        a1_holds: a1.holds,
        a1_status: a1.status,
        a1_gap: a1.gap,
        a1_index_j: a1.index_j,
        accuracy_gradient: a1.gradient,
        a2_holds: a2.holds,
        a2_witness_index: a2.witness_index,
        a2_witness_value: a2.witness_value,
        a3_holds: a3.holds,
        a3_inner_product: a3.inner_product,
        sensitivity_gradient_at_opt: a3.sensitivity_gradient,
        config: *cfg,
    })
}

/// Nonzero sensitivity gradient at `y*`, the boundary-response identity
/// `∂/∂y (∂A/∂θ_j) = -diag(w) ∂y*/∂θ_j`, and a descent step that lowers the
/// sensitivity.
pub fn theorem1_witness(pair: &HypothesisPair, cfg: &CheckConfig) -> Result<Theorem1Witness> {
    let b = optimum(pair)?;
    let a1 = check_a1(pair, cfg)?;
    let grad = sensitivity_boundary_gradient(&b, pair, cfg.norm, cfg.y_step)?;
    let gradient_norm = grad.iter().map(|x| x * x).sum::<f64>().sqrt();
    let withheld = cfg.norm == Norm::Inf && !a1.holds;

    let jac = gradient_boundary_jacobian(&b, pair)?;
    let w = boundary_curvature(&b, pair);
    let n_theta = pair.n_theta();
    let mut rhs = vec![vec![0.0; n_theta]; b.len()];
    for j in 0..n_theta {
        let dy = boundary_theta_response(pair, j, cfg.theta_step)?;
        for i in 0..b.len() {
            rhs[i][j] = -w[i] * dy[i];
        }
    }
    let identity_max_error = jac
        .iter()
        .flatten()
        .zip(rhs.iter().flatten())
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));

    let baseline_sensitivity = sensitivity(&b, pair, cfg.norm)?;
    let baseline_accuracy = accuracy(&b, pair);
    let nonzero = !withheld && gradient_norm > cfg.gradient_threshold;
    let descent = if gradient_norm > 0.0 {
        descend(&b, pair, cfg.norm, &grad, gradient_norm, baseline_sensitivity, baseline_accuracy)?
    } else {
        None
    };
    Ok(Theorem1Witness {
        norm: cfg.norm,
        sensitivity_gradient: grad,
        gradient_norm,
        nonzero,
        withheld,
        identity_lhs: jac,
        identity_rhs: rhs,
        identity_max_error,
        identity_holds: identity_max_error <= cfg.identity_tol,
        baseline_sensitivity,
        baseline_accuracy,
        descent,
    })
}

fn descend(
    b: &BoundarySet,
    pair: &HypothesisPair,
    norm: Norm,
    grad: &[f64],
    gnorm: f64,
    s0: f64,
    a0: f64,
) -> Result<Option<DescentStep>> {
    let mut step = 1e-3;
    for _ in 0..40 {
        let y: Vec<f64> = b
            .boundaries()
            .iter()
            .zip(grad)
            .map(|(y, g)| y - step * g / gnorm)
            .collect();
        let bs = BoundarySet::from_unsorted(y, b.orientation())?;
        let s = sensitivity(&bs, pair, norm)?;
        let a = accuracy(&bs, pair);
        if s < s0 && a <= a0 + 1e-12 {
            return Ok(Some(DescentStep {
                step,
                boundaries: bs.boundaries().to_vec(),
                sensitivity: s,
                accuracy: a,
            }));
        }
        step *= 0.5;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::DensityModel;

    fn table1() -> HypothesisPair {
        HypothesisPair::gaussian(0.0, 9.0, 9.0, 4.0).unwrap()
    }

    fn fig2c() -> HypothesisPair {
        HypothesisPair::gaussian(0.0, 4.0, 5.0, 3.0).unwrap()
    }

    #[test]
    fn a1_table1_holds_at_sigma1() {
        let r = check_a1(&table1(), &CheckConfig::default()).unwrap();
        assert!(r.holds);
        assert_eq!(r.index_j, 3);
        assert!(r.gap > 1e-3);
    }

    #[test]
    fn a1_fig2c_tied_between_means() {
        let r = check_a1(&fig2c(), &CheckConfig::default()).unwrap();
        assert!(!r.holds);
        assert_eq!(r.status, A1Status::Tied);
        assert_eq!(r.max_indices, vec![0, 2]);
        assert!((r.gradient[0].abs() - 0.043).abs() < 2e-3);
    }

    #[test]
    fn a1_symmetric_pair_fails() {
        let p = HypothesisPair::gaussian(-1.5, 2.0, 1.5, 2.0).unwrap();
        let r = check_a1(&p, &CheckConfig::default()).unwrap();
        assert!(!r.holds);
        assert!((r.gradient[0].abs() - r.gradient[2].abs()).abs() < 1e-15);
    }

    #[test]
    fn a2_cases() {
        let cfg = CheckConfig::default();
        assert!(check_a2(&table1(), 3, &cfg).unwrap().holds);
        // at mu = ±1, sigma = 1 the midpoint root is stationary in sigma1
        let p = HypothesisPair::gaussian(-1.0, 1.0, 1.0, 1.0).unwrap();
        let r = check_a2(&p, 3, &cfg).unwrap();
        assert!(r.products[0].abs() < 1e-9);
        assert!(check_a2(&p, 0, &cfg).unwrap().holds);
        let e = HypothesisPair::new(
            DensityModel::exponential(1.0).unwrap(),
            DensityModel::exponential(2.0).unwrap(),
            0.5,
        )
        .unwrap();
        let a1 = check_a1(&e, &cfg).unwrap();
        assert!(check_a2(&e, a1.index_j, &cfg).unwrap().holds);
    }

    #[test]
    fn a3_table1_holds() {
        let r = check_a3(&table1(), &CheckConfig::default()).unwrap();
        assert!(r.holds, "{r:?}");
        assert!(r.inner_product.abs() > 1e-6);
    }

    #[test]
    fn fd_sensitivity_gradient_matches_analytic() {
        let p = table1();
        let b = optimum(&p).unwrap();
        let g = accuracy_gradient(&b, &p).unwrap();
        let jac = gradient_boundary_jacobian(&b, &p).unwrap();
        let fd = sensitivity_boundary_gradient(&b, &p, Norm::Inf, 1e-6).unwrap();
        for i in 0..2 {
            let analytic = g[3].signum() * jac[i][3];
            assert!((fd[i] - analytic).abs() < 1e-8, "{} vs {analytic}", fd[i]);
        }
        let fd2 = sensitivity_boundary_gradient(&b, &p, Norm::Two, 1e-6).unwrap();
        let gn = Norm::Two.apply(&g);
        for i in 0..2 {
            let analytic: f64 = (0..4).map(|k| g[k] * jac[i][k]).sum::<f64>() / gn;
            assert!((fd2[i] - analytic).abs() < 1e-8);
        }
    }

    #[test]
    fn theorem1_table1() {
        let w = theorem1_witness(&table1(), &CheckConfig::default()).unwrap();
        assert!(w.nonzero && !w.withheld);
        assert!(w.identity_holds, "{}", w.identity_max_error);
        let d = w.descent.unwrap();
        assert!(d.sensitivity < w.baseline_sensitivity);
        assert!(d.accuracy <= w.baseline_accuracy + 1e-12);
    }

    #[test]
    fn theorem1_fig2c_inf_withheld_two_nonzero() {
        let w = theorem1_witness(&fig2c(), &CheckConfig::default()).unwrap();
        assert!(w.withheld && !w.nonzero);
        let cfg = CheckConfig {
            norm: Norm::Two,
            ..CheckConfig::default()
        };
        let w2 = theorem1_witness(&fig2c(), &cfg).unwrap();
        assert!(w2.nonzero && w2.gradient_norm > 1e-5);
        assert!(w2.descent.is_some());
    }

    #[test]
    fn identity_with_equal_means() {
        // roots at ±r; the mean columns agree across the two boundaries
        let p = HypothesisPair::gaussian(0.0, 3.0, 0.0, 1.0).unwrap();
        let w = theorem1_witness(&p, &CheckConfig::default()).unwrap();
        assert!(w.identity_holds);
        let lhs = &w.identity_lhs;
        assert!((lhs[0][0] - lhs[1][0]).abs() < 1e-12);
    }
}
