use thiserror::Error;

/// Which end of the radial interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pole {
    Start,
    End,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(&'static str),
    #[error("invalid profile: {0}")]
    InvalidProfile(&'static str),
    #[error("pole {pole:?} is not regular: {detail} (value {value})")]
    PoleRegularity { pole: Pole, detail: &'static str, value: f64 },
    #[error("assembly failed: {0}")]
    Assembly(&'static str),
    #[error("eigensolver did not converge for eigenvalue {index}: residual {residual:e}")]
    NoConvergence { index: usize, residual: f64 },
    #[error("eigenfunction is constant")]
    DegenerateEigenfunction,
    #[error("argument {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },
    #[error("hypothesis violated: {0}")]
    Hypothesis(&'static str),
    #[error("bound not applicable: {0}")]
    Inapplicable(&'static str),
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
