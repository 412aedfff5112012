use crate::numerics::QuadratureResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The adaptive quadrature ran out of subdivisions. Carries the best
    /// estimate reached together with its (too large) error estimate.
    #[error(
        "quadrature tolerance not met: value {} with error estimate {:e} after {} subdivisions",
        .0.value, .0.error_estimate, .0.subdivisions_used
    )]
    ToleranceNotMet(QuadratureResult),

    #[error("non-finite state on path {path} at step {step}")]
    NonFiniteState { path: usize, step: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("sigma({x}) = {sigma} is below the floor {floor}")]
    SigmaBelowFloor { x: f64, sigma: f64, floor: f64 },

    #[error("sigma violates the Lipschitz bound {lipschitz} between {x} and {y}")]
    LipschitzViolated { lipschitz: f64, x: f64, y: f64 },

    #[error("space grid too narrow: boundary mass {boundary_mass:e} exceeds {limit:e}")]
    GridTooNarrow { boundary_mass: f64, limit: f64 },

    #[error("bound not attained at {x}: estimate {estimate}, bound {bound}, gap {gap} > tolerance {tolerance}")]
    AttainmentFailed {
        x: f64,
        estimate: f64,
        bound: f64,
        gap: f64,
        tolerance: f64,
    },

    #[error("drift expression: {0}")]
    DriftSyntax(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
