use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid length distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid window [{a}, {b}]")]
    InvalidWindow { a: f64, b: f64 },

    #[error("clan exploration capped after {sampled} rectangles")]
    Capped { sampled: usize },

    #[error("moment domain violation: rho1 = {rho1}, rho2 = {rho2}")]
    MomentDomain { rho1: f64, rho2: f64 },

    #[error("mean matrix requires a discrete length law")]
    NotDiscrete,

    #[error("power iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("all {reps} replications were capped at {cap} rectangles")]
    AllCapped { reps: usize, cap: usize },

    #[error("invalid fit request: {0}")]
    InvalidFit(String),

    #[error("no divergence detected in grid")]
    NoDivergence,

    #[error("{0}")]
    InvalidArgument(String),
}
