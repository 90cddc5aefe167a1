use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("curve is not regular at u = {u} (speed {speed:e})")]
    NonRegular { u: f64, speed: f64 },

    #[error("frame undefined at straight point s = {s} (kappa = {kappa:e})")]
    FrameUndefined { s: f64, kappa: f64 },

    #[error("cannot close curve: heading gap {heading_gap:e} rad, position gap {position_gap:e}")]
    CannotClose { heading_gap: f64, position_gap: f64 },

    #[error("tube self-intersects: curvature times reach = {kappa_reach} >= 1")]
    SelfIntersection { kappa_reach: f64 },

    #[error("point (q2 = {q2}, q3 = {q3}) lies outside the cross section")]
    OutsideCrossSection { q2: f64, q3: f64 },

    #[error("arc length {s} is outside the curve domain [0, {length}]")]
    OutOfDomain { s: f64, length: f64 },

    #[error("projection did not converge: last s = {last_s}, residual = {residual:e}")]
    ProjectionDiverged { last_s: f64, residual: f64 },

    #[error("explicit step dt = {dt:e} violates stability; max stable dt = {max_dt:e}")]
    CflViolation { dt: f64, max_dt: f64 },

    #[error("inconsistent boundary conditions: {0}")]
    InconsistentBoundary(String),

    #[error("partition areas sum to {sum} but the cross section has area {sigma}")]
    InconsistentAreas { sum: f64, sigma: f64 },

    #[error("wall crossing search did not converge in {iterations} iterations")]
    WallCrossing { iterations: usize },

    #[error("particle at s = {s} lies outside the grid [{lo}, {hi})")]
    OutsideGrid { s: f64, lo: f64, hi: f64 },

    #[error("field support wraps around the periodic domain; use unwrapped Monte Carlo moments")]
    WrappedSupport,

    #[error("ill-conditioned fit window: {0}")]
    IllConditioned(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
