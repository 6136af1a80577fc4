use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NumericsError {
    #[error("quadrature did not converge (last two estimates {previous:e} and {last:e})")]
    QuadratureNotConverged { previous: f64, last: f64 },
    #[error("no feasible point: objective is infinite on the whole search grid")]
    NoFeasiblePoint,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("operation requires a {expected} link, got {got}")]
    WrongServiceModel {
        expected: &'static str,
        got: &'static str,
    },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("empirical violation needs at least one delay sample")]
    NoSamples,
    #[error(transparent)]
    Model(#[from] ModelError),
}
