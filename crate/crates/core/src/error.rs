use thiserror::Error;

/// Failure modes shared by every geometric routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point ({x1}, {x2}) is not strictly inside the unit disc")]
    OutsideDisc { x1: f64, x2: f64 },

    #[error("point at radius {radius} exceeds the numeric-route limit {limit}")]
    NearBoundary { radius: f64, limit: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("zero tangent vector")]
    ZeroVector,

    #[error("non-finite coordinate")]
    NonFinite,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Lorentz quadratic form is negative ({0}); vector is timelike")]
    Timelike(f64),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
