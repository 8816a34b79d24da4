//! Boundary-set classifiers, their accuracy and their sensitivity.
//!
//! A classifier with boundaries `y1 <= ... <= yn` labels the `n + 1`
//! intervals of the real line alternately. With [`Orientation::H0First`] the
//! leftmost interval `(-inf, y1)` is `H0`; [`Orientation::H1First`] is the
//! swapped configuration. Accuracy is
//!
//! ```text
//!   A(y; θ) = Σ_k p_{ℓ(k)} (F_{ℓ(k)}(y_{k+1}) - F_{ℓ(k)}(y_k))
//! ```
//!
//! summed over intervals `k` with label `ℓ(k)`, which is the alternating
//! CDF sum written interval by interval. Sensitivity is a norm of `∂A/∂θ` at
//! fixed boundaries.

use serde::{Deserialize, Serialize};

use crate::boundary_solver;
use crate::densities::{Hypothesis, HypothesisPair};
use crate::error::{Error, Result};

/// Which hypothesis owns the leftmost interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    H0First,
    H1First,
}

impl Orientation {
    pub fn first(self) -> Hypothesis {
        match self {
            Self::H0First => Hypothesis::H0,
            Self::H1First => Hypothesis::H1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Self::H0First => Self::H1First,
            Self::H1First => Self::H0First,
        }
    }

    pub fn with_first(h: Hypothesis) -> Self {
        match h {
            Hypothesis::H0 => Self::H0First,
            Hypothesis::H1 => Self::H1First,
        }
    }
}

/// Norm used to turn the accuracy gradient into a sensitivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    Inf,
    Two,
}

impl Norm {
    pub fn apply(self, v: &[f64]) -> f64 {
        match self {
            Self::Inf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            Self::Two => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        }
    }
}

impl std::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" => Ok(Self::Inf),
            "two" | "2" => Ok(Self::Two),
            other => Err(Error::InvalidParameter(format!("unknown norm `{other}`"))),
        }
    }
}

/// Sorted finite boundaries plus the label of the leftmost interval.
///
/// An empty boundary list is a constant classifier; it can only be built
/// with [`BoundarySet::constant`] and arises from likelihood-ratio equations
/// without sign changes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundarySet {
    boundaries: Vec<f64>,
    orientation: Orientation,
}

impl BoundarySet {
    pub fn new(boundaries: Vec<f64>, orientation: Orientation) -> Result<Self> {
        if boundaries.is_empty() {
            return Err(Error::InvalidParameter("a boundary set needs at least one boundary".into()));
        }
        if let Some(b) = boundaries.iter().find(|b| !b.is_finite()) {
            return Err(Error::InvalidParameter(format!("boundary {b} is not finite")));
        }
        if boundaries.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter(format!(
                "boundaries must be non-decreasing: {boundaries:?}"
            )));
        }
        Ok(Self {
            boundaries,
            orientation,
        })
    }

    /// Sorts the boundaries before validating them.
    pub fn from_unsorted(mut boundaries: Vec<f64>, orientation: Orientation) -> Result<Self> {
        boundaries.sort_by(f64::total_cmp);
        Self::new(boundaries, orientation)
    }

    pub fn linear(y: f64, orientation: Orientation) -> Result<Self> {
        Self::new(vec![y], orientation)
    }

    /// Assigns every observation to `label`.
    pub fn constant(label: Hypothesis) -> Self {
        Self {
            boundaries: Vec::new(),
            orientation: Orientation::with_first(label),
        }
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn len(&self) -> usize {
        self.boundaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundaries.is_empty()
    }

    pub fn flipped(&self) -> Self {
        Self {
            boundaries: self.boundaries.clone(),
            orientation: self.orientation.flipped(),
        }
    }

    /// Label of interval `k`, where interval `k` is `(y_k, y_{k+1})` with
    /// `y_0 = -inf` and `y_{n+1} = +inf`.
    pub fn interval_label(&self, k: usize) -> Hypothesis {
        let first = self.orientation.first();
        if k % 2 == 0 {
            first
        } else {
            first.other()
        }
    }

    /// Label at `x`. Boundary points belong to the closed odd-indexed
    /// intervals, so with `H0First` a point equal to a boundary is `H1`.
    pub fn classify(&self, x: f64) -> Hypothesis {
        let k = self.boundaries.partition_point(|&b| b < x);
        if k < self.boundaries.len() && self.boundaries[k] == x {
            return self.orientation.first().other();
        }
        self.interval_label(k)
    }

    /// `(lo, hi, label)` for each interval, sentinels included.
    fn intervals(&self) -> impl Iterator<Item = (f64, f64, Hypothesis)> + '_ {
        let n = self.boundaries.len();
        (0..=n).map(move |k| {
            let lo = if k == 0 { f64::NEG_INFINITY } else { self.boundaries[k - 1] };
            let hi = if k == n { f64::INFINITY } else { self.boundaries[k] };
            (lo, hi, self.interval_label(k))
        })
    }
}

impl<'de> Deserialize<'de> for BoundarySet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            boundaries: Vec<f64>,
            orientation: Orientation,
        }
        let raw = Raw::deserialize(d)?;
        if raw.boundaries.is_empty() {
            return Ok(Self::constant(raw.orientation.first()));
        }
        Self::new(raw.boundaries, raw.orientation).map_err(serde::de::Error::custom)
    }
}

/// The three classifier families.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierSpec {
    General(BoundarySet),
    /// Likelihood-ratio threshold `eta`; `boundaries` is filled in by
    /// [`ClassifierSpec::resolve`].
    MaximumLikelihood {
        eta: f64,
        boundaries: Option<BoundarySet>,
    },
    Linear {
        y: f64,
        orientation: Orientation,
    },
}

impl ClassifierSpec {
    pub fn ml(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidParameter(format!("eta must be positive, got {eta}")));
        }
        Ok(Self::MaximumLikelihood {
            eta,
            boundaries: None,
        })
    }

    /// Computes the boundaries of a maximum-likelihood classifier for `pair`.
    /// Other kinds are returned unchanged.
    pub fn resolve(&self, pair: &HypothesisPair) -> Result<Self> {
        match self {
            Self::MaximumLikelihood { eta, .. } => {
                let report = boundary_solver::ml_boundaries(pair, *eta)?;
                Ok(Self::MaximumLikelihood {
                    eta: *eta,
                    boundaries: Some(report.boundary_set()),
                })
            }
            other => Ok(other.clone()),
        }
    }

    pub fn boundary_set(&self) -> Result<BoundarySet> {
        match self {
            Self::General(b) => Ok(b.clone()),
            Self::MaximumLikelihood { boundaries, .. } => boundaries.clone().ok_or(Error::UnresolvedMl),
            Self::Linear { y, orientation } => BoundarySet::linear(*y, *orientation),
        }
    }

    /// Label of `x`. A maximum-likelihood classifier decides `H1` iff
    /// `p1 f1(x) >= eta p0 f0(x)`, evaluated in the log domain.
    pub fn classify(&self, pair: &HypothesisPair, x: f64) -> Result<Hypothesis> {
        match self {
            Self::MaximumLikelihood { eta, .. } => {
                if pair.ln_likelihood_ratio(x) >= eta.ln() {
                    Ok(Hypothesis::H1)
                } else {
                    Ok(Hypothesis::H0)
                }
            }
            other => Ok(other.boundary_set()?.classify(x)),
        }
    }

    pub fn accuracy(&self, pair: &HypothesisPair) -> Result<f64> {
        Ok(accuracy(&self.boundary_set()?, pair))
    }

    pub fn accuracy_gradient(&self, pair: &HypothesisPair) -> Result<Vec<f64>> {
        accuracy_gradient(&self.boundary_set()?, pair)
    }

    pub fn sensitivity(&self, pair: &HypothesisPair, norm: Norm) -> Result<f64> {
        sensitivity(&self.boundary_set()?, pair, norm)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
enum KindTag {
    General,
    Ml,
    Linear,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifierJson {
    kind: KindTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boundaries: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    orientation: Option<Orientation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eta: Option<f64>,
}

impl Serialize for ClassifierSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let json = match self {
            Self::General(b) => ClassifierJson {
                kind: KindTag::General,
                boundaries: Some(b.boundaries.clone()),
                orientation: Some(b.orientation),
                eta: None,
            },
            Self::MaximumLikelihood { eta, boundaries } => ClassifierJson {
                kind: KindTag::Ml,
                boundaries: boundaries.as_ref().map(|b| b.boundaries.clone()),
                orientation: boundaries.as_ref().map(|b| b.orientation),
                eta: Some(*eta),
            },
            Self::Linear { y, orientation } => ClassifierJson {
                kind: KindTag::Linear,
                boundaries: Some(vec![*y]),
                orientation: Some(*orientation),
                eta: None,
            },
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClassifierSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = ClassifierJson::deserialize(d)?;
        let orientation = j.orientation.unwrap_or(Orientation::H0First);
        match j.kind {
            KindTag::General => {
                let b = j.boundaries.ok_or_else(|| D::Error::missing_field("boundaries"))?;
                BoundarySet::new(b, orientation)
                    .map(Self::General)
                    .map_err(D::Error::custom)
            }
            KindTag::Ml => {
                let eta = j.eta.ok_or_else(|| D::Error::missing_field("eta"))?;
                let mut spec = Self::ml(eta).map_err(D::Error::custom)?;
                if let (Some(b), Self::MaximumLikelihood { boundaries, .. }) = (j.boundaries, &mut spec) {
                    *boundaries = Some(if b.is_empty() {
                        BoundarySet::constant(orientation.first())
                    } else {
                        BoundarySet::new(b, orientation).map_err(D::Error::custom)?
                    });
                }
                Ok(spec)
            }
            KindTag::Linear => {
                let b = j.boundaries.ok_or_else(|| D::Error::missing_field("boundaries"))?;
                if b.len() != 1 || !b[0].is_finite() {
                    return Err(D::Error::custom("a linear classifier has exactly one finite boundary"));
                }
                Ok(Self::Linear { y: b[0], orientation })
            }
        }
    }
}

/// Probability of a correct decision under the prior-weighted mixture.
pub fn accuracy(b: &BoundarySet, pair: &HypothesisPair) -> f64 {
    let acc: f64 = b
        .intervals()
        .map(|(lo, hi, label)| {
            let m = pair.model(label);
            pair.prior(label) * (m.cdf(hi) - m.cdf(lo))
        })
        .sum();
    debug_assert!(
        (-1e-12..=1.0 + 1e-12).contains(&acc),
        "accuracy {acc} outside [0, 1]"
    );
    acc
}

/// `∂A/∂θ` at fixed boundaries, ordered like [`HypothesisPair::theta`].
pub fn accuracy_gradient(b: &BoundarySet, pair: &HypothesisPair) -> Result<Vec<f64>> {
    let mut grad = vec![0.0; pair.n_theta()];
    for (lo, hi, label) in b.intervals() {
        let m = pair.model(label);
        let p = pair.prior(label);
        let off = pair.theta_offset(label);
        let g_hi = m.grad_cdf_params(hi)?;
        let g_lo = m.grad_cdf_params(lo)?;
        for (k, (gh, gl)) in g_hi.iter().zip(&g_lo).enumerate() {
            grad[off + k] += p * (gh - gl);
        }
    }
    Ok(grad)
}

pub fn sensitivity(b: &BoundarySet, pair: &HypothesisPair, norm: Norm) -> Result<f64> {
    Ok(norm.apply(&accuracy_gradient(b, pair)?))
}

/// Labels on the left and right of boundary `i`.
fn sides(b: &BoundarySet, i: usize) -> (Hypothesis, Hypothesis) {
    (b.interval_label(i), b.interval_label(i + 1))
}

/// `∂A/∂y_i = p_a f_a(y_i) - p_b f_b(y_i)` with `a`, `b` the labels left and
/// right of the boundary.
pub fn boundary_gradient(b: &BoundarySet, pair: &HypothesisPair) -> Vec<f64> {
    b.boundaries
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let (left, right) = sides(b, i);
            pair.prior(left) * pair.model(left).pdf(y) - pair.prior(right) * pair.model(right).pdf(y)
        })
        .collect()
}

/// Diagonal of `∂²A/∂y²`: `w_i = p_a f_a'(y_i) - p_b f_b'(y_i)`.
pub fn boundary_curvature(b: &BoundarySet, pair: &HypothesisPair) -> Vec<f64> {
    b.boundaries
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let (left, right) = sides(b, i);
            pair.prior(left) * pair.model(left).dpdf_dx(y)
                - pair.prior(right) * pair.model(right).dpdf_dx(y)
        })
        .collect()
}

/// Mixed partials `J[i][k] = ∂/∂y_i (∂A/∂θ_k)`.
pub fn gradient_boundary_jacobian(b: &BoundarySet, pair: &HypothesisPair) -> Result<Vec<Vec<f64>>> {
    b.boundaries
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let (left, right) = sides(b, i);
            let mut row = vec![0.0; pair.n_theta()];
            let gl = pair.model(left).grad_pdf_params(y)?;
            let off = pair.theta_offset(left);
            for (k, g) in gl.iter().enumerate() {
                row[off + k] += pair.prior(left) * g;
            }
            let gr = pair.model(right).grad_pdf_params(y)?;
            let off = pair.theta_offset(right);
            for (k, g) in gr.iter().enumerate() {
                row[off + k] -= pair.prior(right) * g;
            }
            Ok(row)
        })
        .collect()
}

/// The orientation with the higher accuracy for the given boundaries (ties
/// keep `H0First`), with that accuracy.
pub fn best_orientation(boundaries: &[f64], pair: &HypothesisPair) -> Result<(BoundarySet, f64)> {
    let a = BoundarySet::new(boundaries.to_vec(), Orientation::H0First)?;
    let acc_a = accuracy(&a, pair);
    let b = a.flipped();
    let acc_b = accuracy(&b, pair);
    Ok(if acc_b > acc_a { (b, acc_b) } else { (a, acc_a) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::DensityModel;

    fn table1() -> HypothesisPair {
        HypothesisPair::gaussian(0.0, 9.0, 9.0, 4.0).unwrap()
    }

    fn set(b: &[f64]) -> BoundarySet {
        BoundarySet::new(b.to_vec(), Orientation::H0First).unwrap()
    }

    #[test]
    fn classify_examples() {
        let pair = table1();
        let ml = ClassifierSpec::ml(1.0).unwrap();
        assert_eq!(ml.classify(&pair, 10.0).unwrap(), Hypothesis::H1);
        assert_eq!(ml.classify(&pair, 0.0).unwrap(), Hypothesis::H0);
        let resolved = ml.resolve(&pair).unwrap();
        assert_eq!(resolved.classify(&pair, 10.0).unwrap(), Hypothesis::H1);

        let b = set(&[0.0]);
        assert_eq!(b.classify(-1.0), Hypothesis::H0);
        assert_eq!(b.flipped().classify(-1.0), Hypothesis::H1);
        assert_eq!(b.classify(0.0), Hypothesis::H1);
        assert_eq!(b.flipped().classify(0.0), Hypothesis::H0);
    }

    #[test]
    fn table1_accuracy_and_sensitivity() {
        let pair = table1();
        let c1 = set(&[3.65, 18.78]);
        let c2 = set(&[1.83, 20.60]);
        assert!((accuracy(&c1, &pair) - 0.7891).abs() < 5e-4);
        assert!((accuracy(&c2, &pair) - 0.7766).abs() < 5e-4);
        assert!((sensitivity(&c1, &pair, Norm::Inf).unwrap() - 0.0334).abs() < 1e-3);
        assert!((sensitivity(&c2, &pair, Norm::Inf).unwrap() - 0.0201).abs() < 1e-3);
    }

    #[test]
    fn identical_hypotheses_give_half() {
        let pair = HypothesisPair::gaussian(1.0, 2.0, 1.0, 2.0).unwrap();
        for b in [&[-3.0][..], &[0.0, 0.5], &[-1.0, 2.0, 2.0, 7.0]] {
            assert!((accuracy(&set(b), &pair) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn unresolved_ml_is_an_error() {
        let spec = ClassifierSpec::ml(1.0).unwrap();
        assert_eq!(spec.accuracy(&table1()), Err(Error::UnresolvedMl));
        assert!(ClassifierSpec::ml(0.0).is_err());
    }

    #[test]
    fn fig2c_gradient() {
        let pair = HypothesisPair::gaussian(0.0, 4.0, 5.0, 3.0).unwrap();
        let spec = ClassifierSpec::ml(1.0).unwrap().resolve(&pair).unwrap();
        let g = spec.accuracy_gradient(&pair).unwrap();
        // Shifting H0 right or widening either density moves probability
        // mass to the wrong side of the boundaries, hence the signs.
        let expected = [-0.043, -0.024, 0.043, -0.040];
        for (a, e) in g.iter().zip(expected) {
            assert!((a - e).abs() < 2e-3, "{g:?}");
        }
    }

    #[test]
    fn midpoint_symmetry_equal_variance() {
        let pair = HypothesisPair::gaussian(-1.0, 2.0, 3.0, 2.0).unwrap();
        let g = accuracy_gradient(&set(&[1.0]), &pair).unwrap();
        assert!((g[0] + g[2]).abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences_table1() {
        let pair = table1();
        let b = set(&[3.65, 18.78]);
        let g = accuracy_gradient(&b, &pair).unwrap();
        let theta = pair.theta();
        let h = 1e-5;
        for k in 0..theta.len() {
            let mut up = theta.clone();
            let mut dn = theta.clone();
            up[k] += h;
            dn[k] -= h;
            let fd = (accuracy(&b, &pair.with_theta(&up).unwrap())
                - accuracy(&b, &pair.with_theta(&dn).unwrap()))
                / (2.0 * h);
            assert!((fd - g[k]).abs() < 1e-6, "component {k}: {fd} vs {}", g[k]);
        }
    }

    #[test]
    fn boundary_derivatives_match_finite_differences() {
        let pair = HypothesisPair::new(
            DensityModel::gaussian(0.0, 9.0).unwrap(),
            DensityModel::gaussian(9.0, 4.0).unwrap(),
            0.3,
        )
        .unwrap();
        let ys = [2.0, 11.0, 15.0];
        let b = set(&ys);
        let dy = boundary_gradient(&b, &pair);
        let w = boundary_curvature(&b, &pair);
        let jac = gradient_boundary_jacobian(&b, &pair).unwrap();
        let h = 1e-5;
        for i in 0..ys.len() {
            let shift = |d: f64| {
                let mut v = ys.to_vec();
                v[i] += d;
                set(&v)
            };
            let fd = (accuracy(&shift(h), &pair) - accuracy(&shift(-h), &pair)) / (2.0 * h);
            assert!((fd - dy[i]).abs() < 1e-9);
            let fd2 = (boundary_gradient(&shift(h), &pair)[i] - boundary_gradient(&shift(-h), &pair)[i]) / (2.0 * h);
            assert!((fd2 - w[i]).abs() < 1e-9);
            let gp = accuracy_gradient(&shift(h), &pair).unwrap();
            let gm = accuracy_gradient(&shift(-h), &pair).unwrap();
            for k in 0..4 {
                assert!(((gp[k] - gm[k]) / (2.0 * h) - jac[i][k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn coincident_boundaries_cancel() {
        let pair = table1();
        let b = set(&[4.0, 4.0]);
        assert!((accuracy(&b, &pair) - 0.5).abs() < 1e-15);
        assert_eq!(sensitivity(&b, &pair, Norm::Two).unwrap(), 0.0);
    }

    #[test]
    fn json_forms() {
        let spec: ClassifierSpec =
            serde_json::from_str(r#"{"kind":"general","boundaries":[1.0,2.0],"orientation":"h1_first"}"#).unwrap();
        assert_eq!(
            spec,
            ClassifierSpec::General(BoundarySet::new(vec![1.0, 2.0], Orientation::H1First).unwrap())
        );
        let ml: ClassifierSpec = serde_json::from_str(r#"{"kind":"ml","eta":0.4603}"#).unwrap();
        assert_eq!(ml, ClassifierSpec::ml(0.4603).unwrap());
        let back: ClassifierSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
        assert!(serde_json::from_str::<ClassifierSpec>(r#"{"kind":"general","boundaries":[2.0,1.0]}"#).is_err());
        assert!(serde_json::from_str::<ClassifierSpec>(r#"{"kind":"ml","eta":1,"bogus":1}"#).is_err());
    }
}
