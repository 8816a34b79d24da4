//! Monte Carlo evaluation of a classifier designed on nominal Gaussian
//! densities against densities whose means and standard deviations were
//! shifted by an adversary.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifier::{accuracy, BoundarySet, ClassifierSpec};
use crate::densities::{DensityModel, Hypothesis, HypothesisPair};
use crate::error::{Error, Result};

/// Additive shifts `(μ̄0, σ̄0, μ̄1, σ̄1)` applied to a Gaussian pair.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSpec {
    pub mu_bar_0: f64,
    pub sigma_bar_0: f64,
    pub mu_bar_1: f64,
    pub sigma_bar_1: f64,
}

impl PerturbationSpec {
    /// Widens `H1` by 3.
    pub fn s1() -> Self {
        Self {
            sigma_bar_1: 3.0,
            ..Self::default()
        }
    }

    /// Shifts both hypotheses towards each other and widens them.
    pub fn s2() -> Self {
        Self {
            mu_bar_0: 1.0,
            sigma_bar_0: 2.0,
            mu_bar_1: -2.0,
            sigma_bar_1: 1.5,
        }
    }

    /// The perturbed pair; priors are unchanged.
    pub fn apply(&self, pair: &HypothesisPair) -> Result<HypothesisPair> {
        let shift = |m: &DensityModel, dm: f64, ds: f64, k: usize| -> Result<DensityModel> {
            match *m {
                DensityModel::Gaussian { mean, std_dev } => {
                    let s = std_dev + ds;
                    if !(s > 0.0) || !s.is_finite() || !(mean + dm).is_finite() {
                        return Err(Error::InvalidPerturbation(format!(
                            "perturbed sigma{k} = {std_dev} + {ds} is not positive"
                        )));
                    }
                    DensityModel::gaussian(mean + dm, s)
                }
                _ => Err(Error::NonGaussian),
            }
        };
        HypothesisPair::new(
            shift(pair.h0(), self.mu_bar_0, self.sigma_bar_0, 0)?,
            shift(pair.h1(), self.mu_bar_1, self.sigma_bar_1, 1)?,
            pair.p0(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_obs: usize,
    pub n_trials: usize,
    pub base_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_obs: 10_000,
            n_trials: 100,
            base_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub n_obs: usize,
    pub n_trials: usize,
    pub base_seed: u64,
    pub per_trial_accuracy: Vec<f64>,
    pub mean_accuracy: f64,
    /// Sample standard deviation across trials.
    pub std_accuracy: f64,
    /// Closed-form accuracy of the classifier on the perturbed pair.
    pub analytic_accuracy: f64,
    /// `sqrt(A (1 - A) / (n_obs n_trials))` at the analytic accuracy.
    pub standard_error: f64,
    pub classifier: ClassifierSpec,
    pub perturbation: PerturbationSpec,
}

impl ExperimentReport {
    /// `trial,seed,accuracy` with one row per trial.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,seed,accuracy\n");
        for (t, a) in self.per_trial_accuracy.iter().enumerate() {
            out.push_str(&format!("{t},{},{a}\n", self.base_seed.wrapping_add(t as u64)));
        }
        out
    }

    /// Distance between the Monte Carlo mean and the analytic accuracy in
    /// standard errors.
    pub fn z_score(&self) -> f64 {
        if self.standard_error == 0.0 {
            return if self.mean_accuracy == self.analytic_accuracy { 0.0 } else { f64::INFINITY };
        }
        (self.mean_accuracy - self.analytic_accuracy) / self.standard_error
    }
}

fn resolved_boundaries(nominal: &HypothesisPair, classifier: &ClassifierSpec) -> Result<(ClassifierSpec, BoundarySet)> {
    let resolved = classifier.resolve(nominal)?;
    let b = resolved.boundary_set()?;
    Ok((resolved, b))
}

/// Accuracy of the classifier, with boundaries from the nominal pair,
/// on the perturbed pair.
pub fn analytic_perturbed_accuracy(
    nominal: &HypothesisPair,
    classifier: &ClassifierSpec,
    perturbation: &PerturbationSpec,
) -> Result<f64> {
    let (_, b) = resolved_boundaries(nominal, classifier)?;
    Ok(accuracy(&b, &perturbation.apply(nominal)?))
}

fn run_trial(b: &BoundarySet, perturbed: &HypothesisPair, n_obs: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p1 = perturbed.p1();
    let mut correct = 0usize;
    for _ in 0..n_obs {
        let label = if rng.random::<f64>() < p1 { Hypothesis::H1 } else { Hypothesis::H0 };
        let x = perturbed.model(label).sample_one(&mut rng);
        if b.classify(x) == label {
            correct += 1;
        }
    }
    correct as f64 / n_obs as f64
}

/// Trial `t` uses a `ChaCha8Rng` seeded with `base_seed + t`; each
/// observation draws its label from the priors, then `x` from the perturbed
/// density of that label.
pub fn run_experiment(
    nominal: &HypothesisPair,
    classifier: &ClassifierSpec,
    perturbation: &PerturbationSpec,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport> {
    if cfg.n_obs == 0 || cfg.n_trials == 0 {
        return Err(Error::InvalidParameter("n_obs and n_trials must be positive".into()));
    }
    let perturbed = perturbation.apply(nominal)?;
    let (resolved, b) = resolved_boundaries(nominal, classifier)?;
    let seeds: Vec<u64> = (0..cfg.n_trials as u64).map(|t| cfg.base_seed.wrapping_add(t)).collect();
    let per_trial_accuracy: Vec<f64> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            seeds.par_iter().map(|&s| run_trial(&b, &perturbed, cfg.n_obs, s)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            seeds.iter().map(|&s| run_trial(&b, &perturbed, cfg.n_obs, s)).collect()
        }
    };
    let n = per_trial_accuracy.len() as f64;
    let mean_accuracy = per_trial_accuracy.iter().sum::<f64>() / n;
    let std_accuracy = if per_trial_accuracy.len() > 1 {
        (per_trial_accuracy.iter().map(|a| (a - mean_accuracy).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let analytic_accuracy = accuracy(&b, &perturbed);
    let standard_error =
        (analytic_accuracy * (1.0 - analytic_accuracy) / (cfg.n_obs as f64 * cfg.n_trials as f64)).sqrt();
    Ok(ExperimentReport {
        n_obs: cfg.n_obs,
        n_trials: cfg.n_trials,
        base_seed: cfg.base_seed,
        per_trial_accuracy,
        mean_accuracy,
        std_accuracy,
        analytic_accuracy,
        standard_error,
        classifier: resolved,
        perturbation: *perturbation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table1() -> HypothesisPair {
        HypothesisPair::gaussian(0.0, 9.0, 9.0, 4.0).unwrap()
    }

    #[test]
    fn analytic_values() {
        let p = table1();
        let c1 = ClassifierSpec::ml(1.0).unwrap();
        let zero = analytic_perturbed_accuracy(&p, &c1, &PerturbationSpec::default()).unwrap();
        assert_eq!(zero, c1.resolve(&p).unwrap().accuracy(&p).unwrap());
        let a = analytic_perturbed_accuracy(&p, &c1, &PerturbationSpec::s1()).unwrap();
        assert!((a - 0.6857).abs() < 0.01, "{a}");
    }

    #[test]
    fn invalid_perturbation() {
        let p = table1();
        let bad = PerturbationSpec {
            sigma_bar_1: -4.0,
            ..PerturbationSpec::default()
        };
        assert!(matches!(bad.apply(&p), Err(Error::InvalidPerturbation(_))));
        let e = HypothesisPair::new(
            DensityModel::exponential(1.0).unwrap(),
            DensityModel::exponential(2.0).unwrap(),
            0.5,
        )
        .unwrap();
        assert_eq!(PerturbationSpec::s1().apply(&e), Err(Error::NonGaussian));
    }

    #[test]
    fn small_run_is_deterministic_and_consistent() {
        let p = table1();
        let c = ClassifierSpec::ml(0.4603).unwrap();
        let cfg = ExperimentConfig {
            n_obs: 2000,
            n_trials: 10,
            base_seed: 7,
        };
        let a = run_experiment(&p, &c, &PerturbationSpec::s2(), &cfg).unwrap();
        let b = run_experiment(&p, &c, &PerturbationSpec::s2(), &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.per_trial_accuracy.len(), 10);
        let lo = a.per_trial_accuracy.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = a.per_trial_accuracy.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(lo <= a.mean_accuracy && a.mean_accuracy <= hi);
        assert!(a.z_score().abs() < 4.0);
        assert_eq!(a.to_csv().lines().count(), 11);
        let other = run_experiment(&p, &c, &PerturbationSpec::s2(), &ExperimentConfig { base_seed: 8, ..cfg }).unwrap();
        assert_ne!(a.per_trial_accuracy, other.per_trial_accuracy);
    }

    #[test]
    fn rejects_empty_runs() {
        let cfg = ExperimentConfig {
            n_obs: 0,
            ..ExperimentConfig::default()
        };
        let c = ClassifierSpec::ml(1.0).unwrap();
        assert!(run_experiment(&table1(), &c, &PerturbationSpec::default(), &cfg).is_err());
    }
}
