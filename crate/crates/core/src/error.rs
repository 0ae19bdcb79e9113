use alloc::string::String;

/// Errors produced by the solver core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MrcError {
    /// A special function or basis element was evaluated outside its domain
    /// (zero argument of a Hankel function, a field point on a source).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Rejection sampling exhausted its budget without producing a batch.
    #[error("sampling failure after {rejections} rejections")]
    SamplingFailure { rejections: u64 },

    /// The SVD did not converge. `iteration` is filled in by the solver.
    #[error("numerical failure{}: {detail}", iteration.map(|n| alloc::format!(" at iteration {n}")).unwrap_or_default())]
    NumericalFailure {
        iteration: Option<usize>,
        detail: String,
    },

    #[error("quadrature of degree {degree} cannot resolve order {order}")]
    InsufficientQuadrature { degree: usize, order: usize },
}

impl MrcError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        MrcError::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        MrcError::InvalidArgument(msg.into())
    }

    /// Attach the solver iteration to errors that carry one.
    pub(crate) fn at_iteration(self, n: usize) -> Self {
        match self {
            MrcError::NumericalFailure { detail, .. } => MrcError::NumericalFailure {
                iteration: Some(n),
                detail,
            },
            other => other,
        }
    }
}

pub type Result<T> = core::result::Result<T, MrcError>;
