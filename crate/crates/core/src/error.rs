use thiserror::Error;

use crate::vector::HypothesisFailure;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or inconsistent user data (dimension mismatch, non-finite coordinates).
    #[error("invalid input: {0}")]
    Input(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// The pair violates the standing hypotheses of the bound being evaluated.
    #[error("hypotheses violated: {}", join_failures(.failures))]
    Hypothesis { failures: Vec<HypothesisFailure> },

    /// Adaptive quadrature ran out of depth before meeting its tolerance.
    #[error("quadrature did not converge (estimate {estimate:e}, error bound {error_bound:e})")]
    Quadrature { estimate: f64, error_bound: f64 },

    #[error("sampler exhausted after {0} consecutive rejections; check coord_scale")]
    SamplerExhausted(usize),
}

fn join_failures(failures: &[HypothesisFailure]) -> String {
    failures.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
}
