use thiserror::Error;

/// Errors raised by the evaluators, the simulator and the codebook reader.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge within {terms} terms (partial sum {partial:e})")]
    Convergence { partial: f64, terms: usize },

    #[error("unsupported input: {0}")]
    Capability(String),

    #[error("quadrature accuracy check failed: {0}")]
    Accuracy(String),

    #[error("value out of representable range: {0}")]
    Range(String),

    #[error("Jakes persistence {rho:.6} lies beyond the first zero of J0")]
    BeyondFirstZero { rho: f64 },

    #[error("printed expression is not evaluable: {0}")]
    NotEvaluable(String),

    #[error("codebook file: {0}")]
    Format(String),
}

impl Error {
    /// True for failures of the numerical machinery, as opposed to invalid input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. } | Error::Accuracy(_) | Error::Range(_) | Error::NotEvaluable(_)
        )
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
