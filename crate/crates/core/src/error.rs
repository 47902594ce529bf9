use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order {order} exceeds the supported cap {cap}")]
    OrderCapExceeded { order: i64, cap: u32 },
    #[error("argument {0} is not finite")]
    NonFiniteArgument(f64),
    #[error("argument {x} outside the supported range [{min}, {max}]")]
    ArgumentOutOfRange { x: f64, min: f64, max: f64 },
    #[error("function is singular at x = 0")]
    SingularArgument,
    #[error("dimension {0} is not supported here")]
    InvalidDimension(usize),
    #[error("expected a {expected}-component vector, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point at radius {radius} lies inside the obstacle of radius {obstacle}")]
    InteriorPoint { radius: f64, obstacle: f64 },
    #[error("coincident points")]
    CoincidentPoints,
    #[error("quadrature rule needs at least one node per direction")]
    EmptyRule,
    #[error("invalid spectral window [{minus}, {plus}]")]
    InvalidWindow { minus: f64, plus: f64 },
    #[error("{0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
