use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are grouped by failure class: bad parameters and nongeneric
/// inputs are caller errors; solver/tracking/accuracy failures are numerical
/// and carry enough context to diagnose or retry with different settings.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported chart: {0}; apply a linear change of variables first")]
    UnsupportedChart(String),

    #[error("nongeneric input: {0}")]
    NonGeneric(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("polynomial has no roots (degree 0)")]
    NoRoots,

    #[error("root solver failed to converge: {0}")]
    SolverFailure(String),

    #[error("gamma pole at z = {0}")]
    Pole(Complex64),

    #[error("value out of representable range: {0}")]
    RangeError(String),

    #[error("path too close to branch point {branch_point} (distance {distance:.3e})")]
    ProximityError {
        branch_point: Complex64,
        distance: f64,
    },

    #[error("branch tracking failed: {0}")]
    TrackingFailure(String),

    #[error("quadrature error estimate {estimate:.3e} above target {target:.3e}")]
    AccuracyFailure { estimate: f64, target: f64 },

    #[error("homotopy failed at s = {s}: {reason}")]
    HomotopyFailure { s: f64, reason: String },

    #[error("invalid homotopy: {0}")]
    InvalidHomotopy(String),
}

pub type Result<T> = std::result::Result<T, Error>;
