use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("density family `{0}` does not provide parameter gradients")]
    CapabilityMissing(String),

    #[error("maximum-likelihood classifier boundaries have not been resolved")]
    UnresolvedMl,

    #[error("closed-form boundaries require two Gaussian densities")]
    NonGaussian,

    #[error("empty search interval [{lo}, {hi}]")]
    EmptyInterval { lo: f64, hi: f64 },

    #[error("likelihood-ratio equation has no root")]
    NoRoot,

    #[error("target accuracy {target} is not attainable (maximum {max})")]
    InfeasibleAccuracy { target: f64, max: f64 },

    #[error("invalid perturbation: {0}")]
    InvalidPerturbation(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("serialization: {0}")]
    Serialization(String),
}
