use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("frequency {omega} is outside the evanescent band (0, {cutoff})")]
    NotEvanescent { omega: f64, cutoff: f64 },

    #[error("{what} = {value} is outside the allowed range {range}")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        range: String,
    },

    #[error(
        "quadrature did not converge: estimated error {est_error:e} > tolerance {tol:e} after {evaluations} evaluations"
    )]
    NoConvergence {
        est_error: f64,
        tol: f64,
        evaluations: usize,
    },

    #[error("ill-conditioned fit: {0}")]
    IllConditionedFit(String),

    #[error("empty grid: {0}")]
    EmptyGrid(&'static str),
}
