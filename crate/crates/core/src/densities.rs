//! Parametric scalar densities and the two-hypothesis problem built on them.
//!
//! `Q(z)` throughout this crate is the standard-normal *cumulative*
//! distribution function `P[Z <= z]`, not the upper-tail Q-function used in
//! communications texts.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use rand::RngCore;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard-normal density.
pub fn std_normal_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Standard-normal CDF `Q(z) = P[Z <= z]`.
///
/// Evaluated through `erfc` so that both tails keep full relative precision.
pub fn std_normal_cdf(z: f64) -> f64 {
    if z == f64::NEG_INFINITY {
        return 0.0;
    }
    if z == f64::INFINITY {
        return 1.0;
    }
    0.5 * libm::erfc(-z / SQRT_2)
}

/// A user-registered density family.
///
/// Parameters are passed as a slice so a single registration serves every
/// parameter value; [`DensityModel::with_params`] rebuilds a model at a new
/// point, which is how finite-difference gradients are taken.
pub trait CustomFamily: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    fn param_names(&self) -> Vec<String>;
    fn validate(&self, _params: &[f64]) -> std::result::Result<(), String> {
        Ok(())
    }
    fn pdf(&self, params: &[f64], x: f64) -> f64;
    fn cdf(&self, params: &[f64], x: f64) -> f64;
    fn support(&self, _params: &[f64]) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    /// A centre and scale used to choose default search intervals.
    fn location_scale(&self, params: &[f64]) -> (f64, f64);
    fn sample(&self, params: &[f64], rng: &mut dyn RngCore) -> f64;
    fn grad_pdf(&self, _params: &[f64], _x: f64) -> Option<Vec<f64>> {
        None
    }
    fn grad_cdf(&self, _params: &[f64], _x: f64) -> Option<Vec<f64>> {
        None
    }
    /// Whether gradients may be approximated by central differences when the
    /// analytic forms above return `None`.
    fn finite_difference_gradients(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone)]
pub struct CustomDensity {
    family: Arc<dyn CustomFamily>,
    params: Vec<f64>,
}

impl CustomDensity {
    pub fn family(&self) -> &Arc<dyn CustomFamily> {
        &self.family
    }
}

/// A scalar density with its parameter vector.
///
/// Gaussian parameters are `[mean, std_dev]`; exponential parameters are
/// `[rate]` with support `x >= 0`.
#[derive(Debug, Clone)]
pub enum DensityModel {
    Gaussian { mean: f64, std_dev: f64 },
    Exponential { rate: f64 },
    Custom(CustomDensity),
}

impl PartialEq for DensityModel {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Custom(a), Self::Custom(b)) => {
                Arc::ptr_eq(&a.family, &b.family) && a.params == b.params
            }
            (a, b) => a.family_name() == b.family_name() && a.params() == b.params(),
        }
    }
}

impl DensityModel {
    pub fn gaussian(mean: f64, std_dev: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::InvalidParameter(format!("gaussian mean {mean} is not finite")));
        }
        if !(std_dev > 0.0 && std_dev.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gaussian std_dev must be positive, got {std_dev}"
            )));
        }
        Ok(Self::Gaussian { mean, std_dev })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "exponential rate must be positive, got {rate}"
            )));
        }
        Ok(Self::Exponential { rate })
    }

    pub fn custom(family: Arc<dyn CustomFamily>, params: Vec<f64>) -> Result<Self> {
        if params.len() != family.param_names().len() {
            return Err(Error::InvalidParameter(format!(
                "family `{}` expects {} parameters, got {}",
                family.name(),
                family.param_names().len(),
                params.len()
            )));
        }
        family.validate(&params).map_err(Error::InvalidParameter)?;
        let model = Self::Custom(CustomDensity { family, params });
        #[cfg(debug_assertions)]
        model.check_normalization()?;
        Ok(model)
    }

    #[cfg(debug_assertions)]
    fn check_normalization(&self) -> Result<()> {
        let (lo, hi) = self.support();
        let mass = crate::numeric::quad::integrate(&|x| self.pdf(x), lo, hi, 1e-12);
        if (mass - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "density `{}` integrates to {mass}, not 1",
                self.family_name()
            )));
        }
        Ok(())
    }

    pub fn family_name(&self) -> &str {
        match self {
            Self::Gaussian { .. } => "gaussian",
            Self::Exponential { .. } => "exponential",
            Self::Custom(c) => c.family.name(),
        }
    }

    pub fn param_names(&self) -> Vec<String> {
        match self {
            Self::Gaussian { .. } => vec!["mu".into(), "sigma".into()],
            Self::Exponential { .. } => vec!["lambda".into()],
            Self::Custom(c) => c.family.param_names(),
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Self::Gaussian { mean, std_dev } => vec![mean, std_dev],
            Self::Exponential { rate } => vec![rate],
            Self::Custom(ref c) => c.params.clone(),
        }
    }

    pub fn n_params(&self) -> usize {
        match self {
            Self::Gaussian { .. } => 2,
            Self::Exponential { .. } => 1,
            Self::Custom(c) => c.params.len(),
        }
    }

    /// Same family at a new parameter point.
    pub fn with_params(&self, params: &[f64]) -> Result<Self> {
        if params.len() != self.n_params() {
            return Err(Error::InvalidParameter(format!(
                "expected {} parameters, got {}",
                self.n_params(),
                params.len()
            )));
        }
        match self {
            Self::Gaussian { .. } => Self::gaussian(params[0], params[1]),
            Self::Exponential { .. } => Self::exponential(params[0]),
            Self::Custom(c) => {
                c.family.validate(params).map_err(Error::InvalidParameter)?;
                Ok(Self::Custom(CustomDensity {
                    family: c.family.clone(),
                    params: params.to_vec(),
                }))
            }
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::Gaussian { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Self::Exponential { .. } => (0.0, f64::INFINITY),
            Self::Custom(c) => c.family.support(&c.params),
        }
    }

    /// Centre and scale of the density (mean and standard deviation for the
    /// built-in families).
    pub fn location_scale(&self) -> (f64, f64) {
        match *self {
            Self::Gaussian { mean, std_dev } => (mean, std_dev),
            Self::Exponential { rate } => (1.0 / rate, 1.0 / rate),
            Self::Custom(ref c) => c.family.location_scale(&c.params),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Self::Gaussian { mean, std_dev } => std_normal_pdf((x - mean) / std_dev) / std_dev,
            Self::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            Self::Custom(ref c) => c.family.pdf(&c.params, x),
        }
    }

    /// Natural log of the density; `-inf` outside the support.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        match *self {
            Self::Gaussian { mean, std_dev } => {
                let z = (x - mean) / std_dev;
                -0.5 * z * z - std_dev.ln() - 0.5 * (2.0 * PI).ln()
            }
            Self::Exponential { rate } => {
                if x < 0.0 {
                    f64::NEG_INFINITY
                } else {
                    rate.ln() - rate * x
                }
            }
            Self::Custom(ref c) => c.family.pdf(&c.params, x).ln(),
        }
    }

    /// `P[X <= x]`; accepts `±inf`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x == f64::NEG_INFINITY {
            return 0.0;
        }
        if x == f64::INFINITY {
            return 1.0;
        }
        match *self {
            Self::Gaussian { mean, std_dev } => std_normal_cdf((x - mean) / std_dev),
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Self::Custom(ref c) => c.family.cdf(&c.params, x),
        }
    }

    /// Derivative of the density with respect to the observation.
    pub fn dpdf_dx(&self, x: f64) -> f64 {
        match *self {
            Self::Gaussian { mean, std_dev } => -(x - mean) / (std_dev * std_dev) * self.pdf(x),
            Self::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    -rate * self.pdf(x)
                }
            }
            Self::Custom(_) => {
                let h = 1e-6 * x.abs().max(1.0);
                (self.pdf(x + h) - self.pdf(x - h)) / (2.0 * h)
            }
        }
    }

    /// `∂f(x; θ)/∂θ`, one entry per parameter.
    pub fn grad_pdf_params(&self, x: f64) -> Result<Vec<f64>> {
        match *self {
            Self::Gaussian { mean, std_dev } => {
                let f = self.pdf(x);
                let z = (x - mean) / std_dev;
                Ok(vec![z / std_dev * f, (z * z - 1.0) / std_dev * f])
            }
            Self::Exponential { rate } => {
                if x < 0.0 {
                    Ok(vec![0.0])
                } else {
                    Ok(vec![(1.0 - rate * x) * (-rate * x).exp()])
                }
            }
            Self::Custom(ref c) => match c.family.grad_pdf(&c.params, x) {
                Some(g) => Ok(g),
                None => self.finite_difference(|m| m.pdf(x)),
            },
        }
    }

    /// `∂F(x; θ)/∂θ`, one entry per parameter; zero at `±inf`.
    pub fn grad_cdf_params(&self, x: f64) -> Result<Vec<f64>> {
        if x.is_infinite() {
            if let Self::Custom(c) = self {
                if !c.family.finite_difference_gradients() && c.family.grad_cdf(&c.params, 0.0).is_none() {
                    return Err(Error::CapabilityMissing(c.family.name().to_string()));
                }
            }
            return Ok(vec![0.0; self.n_params()]);
        }
        match *self {
            Self::Gaussian { mean, std_dev } => {
                let f = self.pdf(x);
                let z = (x - mean) / std_dev;
                Ok(vec![-f, -z * f])
            }
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    Ok(vec![0.0])
                } else {
                    Ok(vec![x * (-rate * x).exp()])
                }
            }
            Self::Custom(ref c) => match c.family.grad_cdf(&c.params, x) {
                Some(g) => Ok(g),
                None => self.finite_difference(|m| m.cdf(x)),
            },
        }
    }

    fn finite_difference<F: Fn(&DensityModel) -> f64>(&self, eval: F) -> Result<Vec<f64>> {
        let Self::Custom(c) = self else {
            unreachable!("built-in families have analytic gradients")
        };
        if !c.family.finite_difference_gradients() {
            return Err(Error::CapabilityMissing(c.family.name().to_string()));
        }
        let mut grad = Vec::with_capacity(c.params.len());
        for i in 0..c.params.len() {
            let h = 1e-6 * c.params[i].abs().max(1.0);
            let mut up = c.params.clone();
            let mut down = c.params.clone();
            up[i] += h;
            down[i] -= h;
            let plus = self.with_params(&up)?;
            let minus = self.with_params(&down)?;
            grad.push((eval(&plus) - eval(&minus)) / (2.0 * h));
        }
        Ok(grad)
    }

    pub fn sample_one(&self, rng: &mut dyn RngCore) -> f64 {
        match *self {
            Self::Gaussian { mean, std_dev } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + std_dev * z
            }
            Self::Exponential { rate } => {
                let e: f64 = Exp1.sample(rng);
                e / rate
            }
            Self::Custom(ref c) => c.family.sample(&c.params, rng),
        }
    }

    /// `n` independent draws. The sequence depends only on the generator
    /// state, so a seeded `ChaCha8Rng` reproduces it on every platform.
    pub fn sample(&self, rng: &mut dyn RngCore, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::InvalidParameter("sample count must be at least 1".into()));
        }
        Ok((0..n).map(|_| self.sample_one(rng)).collect())
    }
}

/// Which hypothesis an observation is attributed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    H0,
    H1,
}

impl Hypothesis {
    pub fn other(self) -> Self {
        match self {
            Self::H0 => Self::H1,
            Self::H1 => Self::H0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Self::H0 => 0,
            Self::H1 => 1,
        }
    }
}

/// Two densities and the prior of `H0`; the prior of `H1` is `1 - p0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisPair {
    h0: DensityModel,
    h1: DensityModel,
    p0: f64,
}

impl HypothesisPair {
    pub fn new(h0: DensityModel, h1: DensityModel, p0: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p0) {
            return Err(Error::InvalidParameter(format!("prior p0 must lie in [0, 1], got {p0}")));
        }
        Ok(Self { h0, h1, p0 })
    }

    /// Two Gaussians with equal priors.
    pub fn gaussian(mu0: f64, sigma0: f64, mu1: f64, sigma1: f64) -> Result<Self> {
        Self::new(
            DensityModel::gaussian(mu0, sigma0)?,
            DensityModel::gaussian(mu1, sigma1)?,
            0.5,
        )
    }

    pub fn h0(&self) -> &DensityModel {
        &self.h0
    }

    pub fn h1(&self) -> &DensityModel {
        &self.h1
    }

    pub fn model(&self, h: Hypothesis) -> &DensityModel {
        match h {
            Hypothesis::H0 => &self.h0,
            Hypothesis::H1 => &self.h1,
        }
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        1.0 - self.p0
    }

    pub fn prior(&self, h: Hypothesis) -> f64 {
        match h {
            Hypothesis::H0 => self.p0(),
            Hypothesis::H1 => self.p1(),
        }
    }

    pub fn both_gaussian(&self) -> bool {
        matches!(
            (&self.h0, &self.h1),
            (DensityModel::Gaussian { .. }, DensityModel::Gaussian { .. })
        )
    }

    /// Stacked parameter vector `[θ0; θ1]`.
    pub fn theta(&self) -> Vec<f64> {
        let mut t = self.h0.params();
        t.extend(self.h1.params());
        t
    }

    pub fn n_theta(&self) -> usize {
        self.h0.n_params() + self.h1.n_params()
    }

    /// Parameter names suffixed with the hypothesis index, e.g. `sigma1`.
    pub fn theta_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.h0.param_names().into_iter().map(|n| format!("{n}0")).collect();
        names.extend(self.h1.param_names().into_iter().map(|n| format!("{n}1")));
        names
    }

    /// Offset of hypothesis `h`'s block inside [`theta`](Self::theta).
    pub fn theta_offset(&self, h: Hypothesis) -> usize {
        match h {
            Hypothesis::H0 => 0,
            Hypothesis::H1 => self.h0.n_params(),
        }
    }

    pub fn with_theta(&self, theta: &[f64]) -> Result<Self> {
        let k = self.h0.n_params();
        if theta.len() != self.n_theta() {
            return Err(Error::InvalidParameter(format!(
                "expected {} parameters, got {}",
                self.n_theta(),
                theta.len()
            )));
        }
        Ok(Self {
            h0: self.h0.with_params(&theta[..k])?,
            h1: self.h1.with_params(&theta[k..])?,
            p0: self.p0,
        })
    }

    /// Log of the likelihood ratio `p1 f1(x) / (p0 f0(x))`.
    pub fn ln_likelihood_ratio(&self, x: f64) -> f64 {
        (self.p1().ln() + self.h1.ln_pdf(x)) - (self.p0.ln() + self.h0.ln_pdf(x))
    }
}

// ---- JSON forms ------------------------------------------------------------

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianParams {
    mu: f64,
    sigma: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExponentialParams {
    lambda: f64,
}

/// Serialized form `{"family": "...", "params": {...}}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "lowercase")]
enum DensitySpec {
    Gaussian(GaussianParams),
    Exponential(ExponentialParams),
}

impl TryFrom<DensitySpec> for DensityModel {
    type Error = Error;

    fn try_from(spec: DensitySpec) -> Result<Self> {
        match spec {
            DensitySpec::Gaussian(p) => Self::gaussian(p.mu, p.sigma),
            DensitySpec::Exponential(p) => Self::exponential(p.lambda),
        }
    }
}

impl Serialize for DensityModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let spec = match *self {
            Self::Gaussian { mean, std_dev } => DensitySpec::Gaussian(GaussianParams {
                mu: mean,
                sigma: std_dev,
            }),
            Self::Exponential { rate } => DensitySpec::Exponential(ExponentialParams { lambda: rate }),
            Self::Custom(ref c) => {
                return Err(serde::ser::Error::custom(format!(
                    "custom family `{}` has no JSON form",
                    c.family.name()
                )))
            }
        };
        spec.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = DensitySpec::deserialize(d)?;
        Self::try_from(spec).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairSpec {
    h0: DensityModel,
    h1: DensityModel,
    p0: f64,
}

impl Serialize for HypothesisPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PairSpec {
            h0: self.h0.clone(),
            h1: self.h1.clone(),
            p0: self.p0,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HypothesisPair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = PairSpec::deserialize(d)?;
        Self::new(spec.h0, spec.h1, spec.p0).map_err(serde::de::Error::custom)
    }
}
