//! Problem instances used throughout the examples and reproductions.

use crate::adversary_sim::PerturbationSpec;
use crate::classifier::{ClassifierSpec, Norm};
use crate::densities::HypothesisPair;
use crate::numeric::linspace;
use crate::param_designer::ParamDesignProblem;

/// `N(0, 9)` against `N(9, 4)` with equal priors.
pub fn table1() -> HypothesisPair {
    HypothesisPair::gaussian(0.0, 9.0, 9.0, 4.0).expect("valid parameters")
}

/// `N(0, 4)` against `N(5, 3)` with equal priors.
pub fn fig2c() -> HypothesisPair {
    HypothesisPair::gaussian(0.0, 4.0, 5.0, 3.0).expect("valid parameters")
}

/// The maximum-accuracy classifier `eta = 1`.
pub fn classifier_c1() -> ClassifierSpec {
    ClassifierSpec::ml(1.0).expect("positive eta")
}

/// The low-sensitivity classifier `eta = 0.4603`.
pub fn classifier_c2() -> ClassifierSpec {
    ClassifierSpec::ml(0.4603).expect("positive eta")
}

pub fn scenario(name: &str) -> Option<PerturbationSpec> {
    match name {
        "s1" => Some(PerturbationSpec::s1()),
        "s2" => Some(PerturbationSpec::s2()),
        "none" => Some(PerturbationSpec::default()),
        _ => None,
    }
}

pub fn fig3(gamma: f64, norm: Norm) -> ParamDesignProblem {
    ParamDesignProblem::fig3(gamma, norm)
}

/// 20 accuracy targets from 0.55 to 0.99.
pub fn fig3_gammas() -> Vec<f64> {
    linspace(0.55, 0.99, 20)
}
