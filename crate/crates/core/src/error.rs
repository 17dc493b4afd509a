use thiserror::Error;

/// Errors raised by the surfcrack library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument {name} = {value} lies outside [-1, 1]")]
    Domain { name: &'static str, value: f64 },

    #[error("chart is singular at ({theta1}, {theta2}): reciprocal condition number {rcond:.3e}")]
    SingularChart { theta1: f64, theta2: f64, rcond: f64 },

    #[error("grid of {n} nodes is too coarse (need {min} or more, odd)")]
    Resolution { n: usize, min: usize },

    #[error("grid function must vanish at both endpoints (got {left:e}, {right:e})")]
    Support { left: f64, right: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    Parameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dense linear system is singular")]
    SingularSystem,

    #[error("discrete energy form is not positive definite")]
    Indefinite,

    #[error("invalid grid: {0}")]
    Grid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
