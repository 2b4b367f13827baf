use thiserror::Error;

/// Errors raised by the lab. Every failure mode that a caller may want to
/// branch on has its own variant; messages carry the offending values.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("x = {x} is not strictly inside the domain {domain}")]
    Domain { x: f64, domain: String },

    #[error("superpotential `{spec}` requires the constant `{name}`")]
    UnknownParameter { spec: String, name: &'static str },

    #[error("invalid parameters: {0}")]
    Validity(String),

    #[error("W never changes sign on {0}; supersymmetry is broken")]
    NoZeroCrossing(String),

    #[error("no sign change bracketed: {0}")]
    Bracket(String),

    #[error("degenerate turning point at x = {x} (dW/dx = {slope:e})")]
    DegenerateTurningPoint { x: f64, slope: f64 },

    #[error("negative radicand {value:e} at x = {x}")]
    NegativeRadicand { x: f64, value: f64 },

    #[error("`{0}` is not a conventional superpotential and has no algebraic spectrum")]
    NoAlgebraicSpectrum(String),

    #[error("box too small: {0}")]
    BoxTooSmall(String),

    #[error("not converged: {0}")]
    NotConverged(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
