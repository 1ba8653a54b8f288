use thiserror::Error;

/// Errors surfaced by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GvmError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bessel function overflow: argument {0} exceeds the exponential range")]
    BesselOverflow(f64),

    #[error("quadrature failure: no convergence with {nodes} nodes (last change {last_change:e})")]
    QuadratureFailure { nodes: usize, last_change: f64 },

    #[error("range error: {0}")]
    Range(String),

    #[error("infeasible autocovariance target: {0}")]
    Infeasible(String),

    #[error("no convergence: best residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    #[error("infinite divergence: reference density vanishes where the density is positive")]
    InfiniteDivergence,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("covariance not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("degenerate distribution, entropy undefined: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, GvmError>;
