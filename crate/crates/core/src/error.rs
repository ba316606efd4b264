use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// The circulant embedding of the requested covariance has an eigenvalue
    /// more negative than the clamping tolerance, so exact sampling is not
    /// possible on this grid.
    #[error(
        "circulant embedding not positive semi-definite: eigenvalue {min_eigenvalue:.6e} \
         below -{tolerance:.6e}"
    )]
    EmbeddingNotPsd {
        min_eigenvalue: f64,
        tolerance: f64,
    },

    /// A trajectory exceeded the blow-up guard, signalling an unresolved
    /// instability or misconfigured parameters.
    #[error("trajectory blow-up: |{channel}| = {value:.6e} exceeded {guard:.1e} at t = {t:.6}")]
    Overflow {
        channel: &'static str,
        value: f64,
        guard: f64,
        t: f64,
    },

    /// Hill-determinant classification flipped when the truncation order was
    /// doubled, so the point cannot be classified at this order.
    #[error("Hill classification not converged at delta={delta}, alpha={alpha} (trunc={trunc})")]
    NotConverged { delta: f64, alpha: f64, trunc: usize },

    /// The decomposition assumptions do not hold for these parameters.
    #[error("invalid regime: {0}")]
    InvalidRegime(String),

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}
