use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("probability {0} lies outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("state amplitudes must not both vanish")]
    ZeroState,

    #[error("spinor is not normalized: |up|^2 + |down|^2 = {0}")]
    NotNormalized(f64),

    #[error("zero vector has no direction")]
    ZeroVector,

    /// The state is already an eigenstate of the measured projection, so the
    /// extremal problem is degenerate and the observer axis does not move.
    #[error("state is an eigenstate of the measured projection; there is no collapse")]
    NoCollapse,

    #[error("grid must have at least {min} points per dimension, got {n_theta}x{n_phi}")]
    GridTooSmall {
        n_theta: usize,
        n_phi: usize,
        min: usize,
    },

    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("no grid point satisfies the constraint within {constraint_tol} at {n_theta}x{n_phi}; loosen the tolerance or refine the grid")]
    Infeasible {
        n_theta: usize,
        n_phi: usize,
        constraint_tol: f64,
    },

    #[error("risk function `{name}` returned a non-finite value for both outcomes or NaN ({value})")]
    NonFiniteRisk { name: String, value: f64 },

    #[error("unknown risk function `{name}`; available: {available}")]
    UnknownRisk { name: String, available: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub(crate) fn finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}
