use thiserror::Error;

/// Errors raised by time-scale construction and the calculus operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("time scale has no pieces")]
    EmptyScale,
    #[error("non-finite endpoint {0}")]
    NonFinite(f64),
    #[error("invalid piece [{left}, {right}]: left endpoint exceeds right")]
    InvalidPiece { left: f64, right: f64 },
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("{0} is not a point of the time scale")]
    NotInScale(f64),
    #[error("reversed bounds: {a} > {b}")]
    ReversedBounds { a: f64, b: f64 },
    #[error("no delta derivative at {0}: maximum of the scale is left-scattered")]
    BoundaryDerivative(f64),
    #[error("quadrature on [{a}, {b}] did not reach tolerance within the depth limit")]
    QuadratureFailure { a: f64, b: f64 },
    #[error("gamma is only defined here for positive arguments, got {0}")]
    NonPositiveArgument(f64),
    #[error("invalid order {0}: expected 0 < alpha <= 50")]
    InvalidOrder(f64),
    #[error("repetition count must be at least 1, got {0}")]
    InvalidRepetition(u32),
    #[error("invalid quadrature config: {0}")]
    InvalidConfig(String),
    #[error(
        "divergent kernel term (t - sigma(s))^{exponent} at s = {point} (strict zero-power policy)"
    )]
    SingularTerm { point: f64, exponent: f64 },
    #[error("evaluation error: {0}")]
    Eval(#[from] crate::expr::EvalError),
    #[error("invalid suite config: {0}")]
    InvalidSuite(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
