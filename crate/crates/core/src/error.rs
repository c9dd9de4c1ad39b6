use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The ambiguity product must satisfy `alpha*gamma > -a_script^2`.
    #[error("ambiguity constraint violated: alpha*gamma = {product} must exceed -a^2 = {bound}")]
    AmbiguityConstraint { product: f64, bound: f64 },

    #[error("momentum p = {p} outside the domain p < {p_max}")]
    MomentumDomain { p: f64, p_max: f64 },

    /// `1 + 2kv/(3w^2) + k^2 x^2/(9w^2)` must stay positive.
    #[error("phase-space constraint violated at x = {x}, v = {v} (value {value})")]
    PhaseConstraint { x: f64, v: f64, value: f64 },

    #[error("amplitude {amplitude} outside [0, {limit})")]
    AmplitudeOutOfRange { amplitude: f64, limit: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("sampled function does not vanish at the grid ends (|psi| = {edge:e}, max {max:e})")]
    BoundaryNotVanishing { edge: f64, max: f64 },

    #[error("eigenvalue bisection did not converge for index {index} within {iterations} iterations")]
    NonConvergence { index: usize, iterations: usize },

    #[error("log-space bound exceeded: {0}")]
    Overflow(String),
}
