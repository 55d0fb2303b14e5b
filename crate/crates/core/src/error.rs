use thiserror::Error;

/// Errors raised by constructors and evaluators in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent must be finite, got {0}")]
    NonFiniteExponent(f64),
    #[error("exponent p = 0 is excluded")]
    ZeroExponent,
    #[error("|p| = {p} is below the minimum {p_min}")]
    ExponentTooSmall { p: f64, p_min: f64 },
    #[error("cone coordinate {name} = {value} must be finite and nonnegative")]
    InvalidCoordinate { name: &'static str, value: f64 },
    #[error("z = {z} exceeds sqrt(xy) = {bound} beyond the Cauchy-Schwarz slack")]
    OutsideCone { z: f64, bound: f64 },
    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),
    #[error("{quantity} is not finite for p = {p}")]
    NonFiniteNorm { quantity: &'static str, p: f64 },
    #[error("operation requires {requirement}, got p = {p}")]
    ExponentOutOfRange { p: f64, requirement: &'static str },
    #[error("degenerate triple: {0}")]
    DegenerateTriple(String),
    #[error("query point (s = {s}, z = {z}) lies outside the half-disc")]
    OutsideDomain { s: f64, z: f64 },
    #[error("boundary resolution {0} is below the minimum of 16")]
    ResolutionTooSmall(usize),
    #[error("derivative blow-up at s = {s}")]
    DerivativeBlowUp { s: f64 },
    #[error("grid of {0} points is too coarse")]
    GridTooSmall(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
