//! Decision boundaries of likelihood-ratio classifiers.
//!
//! The boundaries of the maximum-likelihood classifier with threshold `eta`
//! are the sign changes of `p1 f1(x) - eta p0 f0(x)`. Signs are evaluated as
//! `ln(p1 f1) - ln(eta p0 f0)` so that far tails do not underflow to `0 - 0`.

use serde::Serialize;

use crate::classifier::{accuracy, BoundarySet, Orientation};
use crate::densities::{DensityModel, HypothesisPair};
use crate::error::{Error, Result};
use crate::numeric::root;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootMethod {
    GaussianQuadratic,
    GridBisection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LikelihoodRootReport {
    pub eta: f64,
    pub roots: Vec<f64>,
    pub method: RootMethod,
    /// Hypothesis winning to the left of the first root (everywhere when
    /// there are no roots).
    pub orientation: Orientation,
    /// `|p1 f1(r) - eta p0 f0(r)|` per root.
    pub residuals: Vec<f64>,
    /// Set when a grid scan found no sign change and both interval ends
    /// agree in sign, so narrow excursions between grid points may be missed.
    pub warning: bool,
}

impl LikelihoodRootReport {
    pub fn boundary_set(&self) -> BoundarySet {
        if self.roots.is_empty() {
            BoundarySet::constant(self.orientation.first())
        } else {
            BoundarySet::new(self.roots.clone(), self.orientation)
                .expect("solver roots are sorted and finite")
        }
    }
}

fn residual(pair: &HypothesisPair, eta: f64, x: f64) -> f64 {
    (pair.p1() * pair.h1().pdf(x) - eta * pair.p0() * pair.h0().pdf(x)).abs()
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("eta must be positive, got {eta}")))
    }
}

/// Coefficients `(a, b, c)` with `ln L(x) - ln eta = a x^2 + b x + c` for two
/// Gaussians.
pub fn gaussian_quadratic(pair: &HypothesisPair, eta: f64) -> Result<(f64, f64, f64)> {
    let (
        &DensityModel::Gaussian { mean: m0, std_dev: s0 },
        &DensityModel::Gaussian { mean: m1, std_dev: s1 },
    ) = (pair.h0(), pair.h1())
    else {
        return Err(Error::NonGaussian);
    };
    // Equal spreads make `a` cancel; snap it to zero so the linear branch is taken.
    let a = if (s0 - s1).abs() <= 1e-9 {
        0.0
    } else {
        0.5 * (1.0 / (s0 * s0) - 1.0 / (s1 * s1))
    };
    let b = m1 / (s1 * s1) - m0 / (s0 * s0);
    let c = (s0 / s1).ln() + (pair.p1() / pair.p0()).ln() + m0 * m0 / (2.0 * s0 * s0)
        - m1 * m1 / (2.0 * s1 * s1)
        - eta.ln();
    Ok((a, b, c))
}

fn label_for_sign(positive: bool) -> Orientation {
    if positive {
        Orientation::H1First
    } else {
        Orientation::H0First
    }
}

/// Exact boundaries of the Gaussian maximum-likelihood classifier from the
/// quadratic `a x^2 + b x + c = 0`. A double root is dropped: it bounds a
/// region of measure zero.
pub fn ml_boundaries_gaussian(pair: &HypothesisPair, eta: f64) -> Result<LikelihoodRootReport> {
    check_eta(eta)?;
    let (a, b, c) = gaussian_quadratic(pair, eta)?;
    let (roots, orientation) = if a != 0.0 {
        let disc = b * b - 4.0 * a * c;
        if disc <= f64::EPSILON * b * b || disc <= 0.0 {
            (Vec::new(), label_for_sign(a > 0.0))
        } else {
            // q avoids cancellation between -b and sqrt(disc).
            let sq = disc.sqrt();
            let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
            let (mut r1, mut r2) = (q / a, c / q);
            if q == 0.0 {
                r1 = -sq / (2.0 * a);
                r2 = sq / (2.0 * a);
            }
            if r1 > r2 {
                std::mem::swap(&mut r1, &mut r2);
            }
            (vec![r1, r2], label_for_sign(a > 0.0))
        }
    } else if b != 0.0 {
        (vec![-c / b], label_for_sign(b < 0.0))
    } else {
        (Vec::new(), label_for_sign(c >= 0.0))
    };
    let residuals = roots.iter().map(|&r| residual(pair, eta, r)).collect();
    Ok(LikelihoodRootReport {
        eta,
        roots,
        method: RootMethod::GaussianQuadratic,
        orientation,
        residuals,
        warning: false,
    })
}

/// Search interval and grid for [`ml_boundaries_generic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub interval: Option<(f64, f64)>,
    pub grid: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            interval: None,
            grid: 4096,
        }
    }
}

/// `[min(m_k - 8 s_k), max(m_k + 8 s_k)]` over both models, clipped to the
/// union of their supports.
pub fn default_search_interval(pair: &HypothesisPair) -> (f64, f64) {
    let (m0, s0) = pair.h0().location_scale();
    let (m1, s1) = pair.h1().location_scale();
    let mut lo = (m0 - 8.0 * s0).min(m1 - 8.0 * s1);
    let mut hi = (m0 + 8.0 * s0).max(m1 + 8.0 * s1);
    let (a0, b0) = pair.h0().support();
    let (a1, b1) = pair.h1().support();
    lo = lo.max(a0.min(a1));
    hi = hi.min(b0.max(b1));
    (lo, hi)
}

/// Boundaries of the maximum-likelihood classifier for any pair: scan a grid
/// for sign changes of the log likelihood ratio and bisect each bracket to a
/// width of 1e-12.
pub fn ml_boundaries_generic(
    pair: &HypothesisPair,
    eta: f64,
    search: SearchConfig,
) -> Result<LikelihoodRootReport> {
    check_eta(eta)?;
    let (lo, hi) = search.interval.unwrap_or_else(|| default_search_interval(pair));
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::EmptyInterval { lo, hi });
    }
    let n = search.grid.max(2);
    let ln_eta = eta.ln();
    let g = |x: f64| -> f64 {
        let v = pair.ln_likelihood_ratio(x) - ln_eta;
        if v.is_nan() {
            // both densities vanish; neither hypothesis is favoured
            -f64::MIN_POSITIVE
        } else {
            v
        }
    };
    let xs = crate::numeric::linspace(lo, hi, n);
    let signs: Vec<bool> = xs.iter().map(|&x| g(x) >= 0.0).collect();
    let mut roots = Vec::new();
    for i in 0..n - 1 {
        if signs[i] != signs[i + 1] {
            let f = |x: f64| if g(x) >= 0.0 { 1.0 } else { -1.0 };
            let r = root::bisect(f, xs[i], xs[i + 1], 1e-12).expect("bracket has a sign change");
            roots.push(r);
        }
    }
    let orientation = label_for_sign(signs[0]);
    let warning = roots.is_empty() && signs[0] == signs[n - 1];
    let residuals = roots.iter().map(|&r| residual(pair, eta, r)).collect();
    Ok(LikelihoodRootReport {
        eta,
        roots,
        method: RootMethod::GridBisection,
        orientation,
        residuals,
        warning,
    })
}

/// Closed form for Gaussian pairs, grid bisection otherwise.
pub fn ml_boundaries(pair: &HypothesisPair, eta: f64) -> Result<LikelihoodRootReport> {
    if pair.both_gaussian() {
        ml_boundaries_gaussian(pair, eta)
    } else {
        ml_boundaries_generic(pair, eta, SearchConfig::default())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearOptimum {
    pub y: f64,
    pub orientation: Orientation,
    pub accuracy: f64,
}

/// Best single-threshold classifier: the most accurate of the `eta = 1`
/// roots, each tried with both orientations. Ties go to the smaller root.
pub fn optimal_linear_boundary(pair: &HypothesisPair) -> Result<LinearOptimum> {
    let report = ml_boundaries(pair, 1.0)?;
    let mut best: Option<LinearOptimum> = None;
    for &y in &report.roots {
        for orientation in [Orientation::H0First, Orientation::H1First] {
            let acc = accuracy(&BoundarySet::linear(y, orientation)?, pair);
            if best.as_ref().is_none_or(|b| acc > b.accuracy) {
                best = Some(LinearOptimum {
                    y,
                    orientation,
                    accuracy: acc,
                });
            }
        }
    }
    best.ok_or(Error::NoRoot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::ClassifierSpec;

    fn table1() -> HypothesisPair {
        HypothesisPair::gaussian(0.0, 9.0, 9.0, 4.0).unwrap()
    }

    fn exp_pair(l0: f64, l1: f64) -> HypothesisPair {
        HypothesisPair::new(
            DensityModel::exponential(l0).unwrap(),
            DensityModel::exponential(l1).unwrap(),
            0.5,
        )
        .unwrap()
    }

    fn round2(x: f64) -> f64 {
        (x * 100.0).round() / 100.0
    }

    #[test]
    fn table1_roots() {
        let r = ml_boundaries_gaussian(&table1(), 1.0).unwrap();
        assert_eq!(r.roots.iter().map(|&x| round2(x)).collect::<Vec<_>>(), vec![3.65, 18.78]);
        assert_eq!(r.orientation, Orientation::H0First);
        let r = ml_boundaries_gaussian(&table1(), 0.4603).unwrap();
        assert_eq!(r.roots.iter().map(|&x| round2(x)).collect::<Vec<_>>(), vec![1.83, 20.60]);
    }

    #[test]
    fn equal_variance_midpoint() {
        let pair = HypothesisPair::gaussian(-1.0, 2.5, 1.0, 2.5).unwrap();
        let r = ml_boundaries_gaussian(&pair, 1.0).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert!(r.roots[0].abs() < 1e-15);
        assert_eq!(r.orientation, Orientation::H0First);
    }

    #[test]
    fn degenerate_quadratics() {
        // identical models: L = 1 everywhere, every x is H1 at eta = 1
        let same = HypothesisPair::gaussian(2.0, 1.0, 2.0, 1.0).unwrap();
        let r = ml_boundaries_gaussian(&same, 1.0).unwrap();
        assert!(r.roots.is_empty());
        assert_eq!(r.orientation, Orientation::H1First);
        let r = ml_boundaries_gaussian(&same, 2.0).unwrap();
        assert_eq!(r.orientation, Orientation::H0First);

        // large eta: the H1 bump never reaches the threshold
        let r = ml_boundaries_gaussian(&table1(), 1e3).unwrap();
        assert!(r.roots.is_empty());
        assert_eq!(r.orientation, Orientation::H0First);
        let spec = ClassifierSpec::ml(1e3).unwrap().resolve(&table1()).unwrap();
        assert!((spec.accuracy(&table1()).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn residuals_are_small() {
        for eta in [0.1, 0.4603, 1.0, 2.0] {
            let pair = table1();
            let r = ml_boundaries_gaussian(&pair, eta).unwrap();
            for (&x, &res) in r.roots.iter().zip(&r.residuals) {
                let scale = (pair.p0() * pair.h0().pdf(x)).max(pair.p1() * pair.h1().pdf(x)).max(1e-300);
                assert!(res <= 1e-10 * scale, "eta {eta}: {res} vs {scale}");
            }
        }
    }

    #[test]
    fn generic_matches_closed_form() {
        let a = ml_boundaries_gaussian(&table1(), 1.0).unwrap();
        let b = ml_boundaries_generic(&table1(), 1.0, SearchConfig::default()).unwrap();
        assert_eq!(b.method, RootMethod::GridBisection);
        assert_eq!(a.roots.len(), b.roots.len());
        for (x, y) in a.roots.iter().zip(&b.roots) {
            assert!((x - y).abs() < 1e-9);
        }
        assert_eq!(a.orientation, b.orientation);
    }

    #[test]
    fn exponential_single_root() {
        let r = ml_boundaries_generic(&exp_pair(1.0, 2.0), 1.0, SearchConfig::default()).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0] - 2f64.ln()).abs() < 1e-11);
        assert_eq!(r.orientation, Orientation::H1First);
    }

    #[test]
    fn huge_eta_has_no_roots() {
        let r = ml_boundaries_generic(&exp_pair(1.0, 2.0), 1e12, SearchConfig::default()).unwrap();
        assert!(r.roots.is_empty());
        assert_eq!(r.orientation, Orientation::H0First);
        assert!(r.warning);
    }

    #[test]
    fn empty_interval_rejected() {
        let cfg = SearchConfig {
            interval: Some((3.0, 3.0)),
            grid: 10,
        };
        assert!(matches!(
            ml_boundaries_generic(&table1(), 1.0, cfg),
            Err(Error::EmptyInterval { .. })
        ));
        assert_eq!(
            ml_boundaries_gaussian(&exp_pair(1.0, 2.0), 1.0),
            Err(Error::NonGaussian)
        );
    }

    #[test]
    fn linear_optima() {
        let o = optimal_linear_boundary(&table1()).unwrap();
        assert_eq!(round2(o.y), 3.65);
        assert_eq!(o.orientation, Orientation::H0First);

        let pair = HypothesisPair::gaussian(1.0, 3.0, 6.0, 3.0).unwrap();
        let o = optimal_linear_boundary(&pair).unwrap();
        assert!((o.y - 3.5).abs() < 1e-12);

        let o = optimal_linear_boundary(&exp_pair(1.0, 2.0)).unwrap();
        assert!((o.y - 2f64.ln()).abs() < 1e-11);
        assert_eq!(o.orientation, Orientation::H1First);
        assert!((o.accuracy - 0.625).abs() < 1e-10);

        let same = HypothesisPair::gaussian(0.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(optimal_linear_boundary(&same), Err(Error::NoRoot));
    }

    #[test]
    fn exponential_linear_optimum_is_the_grid_argmax() {
        let pair = exp_pair(1.0, 2.0);
        let mut best = (0.0, 0.0);
        for i in 0..=20_000 {
            let y = i as f64 * 1e-4;
            for o in [Orientation::H0First, Orientation::H1First] {
                let a = accuracy(&BoundarySet::linear(y, o).unwrap(), &pair);
                if a > best.1 {
                    best = (y, a);
                }
            }
        }
        let o = optimal_linear_boundary(&pair).unwrap();
        assert!((o.y - best.0).abs() < 2e-4);
    }
}
