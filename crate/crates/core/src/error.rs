use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e}) within {max_nodes} nodes")]
    QuadratureNotConverged { tol: f64, estimate: f64, max_nodes: usize },

    #[error("x = {x} falls outside every asymptotic regime for k = {k}, n = {n}")]
    RegimeGap { k: usize, n: usize, x: f64 },

    #[error("k = {k} is below the asymptotic threshold k0 = {k0}")]
    BelowAsymptoticThreshold { k: usize, k0: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("too few usable samples: {found} < {required}")]
    TooFewSamples { found: usize, required: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
