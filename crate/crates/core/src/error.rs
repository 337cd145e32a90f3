use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QsoError {
    #[error("coefficient {name} must lie in [0,1], got {value}")]
    CoefficientOutOfRange { name: &'static str, value: f64 },

    #[error("point {0} is outside the domain [0,1]")]
    OutOfDomain(f64),

    #[error("({x}, {y}) is not a point of the simplex")]
    NotOnSimplex { x: f64, y: f64 },

    #[error("{x} is not a fixed point (residual {residual:e})")]
    NotAFixedPoint { x: f64, residual: f64 },

    #[error("degenerate orbit pair ({x1}, {x2}): points must be distinct and lie in (0,1)")]
    DegenerateOrbit { x1: f64, x2: f64 },

    #[error("invalid interval set: {0}")]
    InvalidIntervalSet(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, QsoError>;
