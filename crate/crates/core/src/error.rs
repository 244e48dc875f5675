use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {function}: {reason}")]
    Domain {
        function: &'static str,
        reason: String,
    },

    /// An adaptive integrator exhausted its budget before meeting the
    /// requested tolerance. Carries the best value found so far.
    #[error("tolerance not met: value {value:e}, error estimate {error_estimate:e} after {evaluations} evaluations")]
    Accuracy {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    /// Collinear or coincident points where a strict configuration is required.
    #[error("degenerate point configuration: {0}")]
    DegenerateInput(&'static str),

    #[error("inconsistent hull classification: {0}")]
    Inconsistent(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            function,
            reason: reason.into(),
        }
    }
}

pub(crate) fn ensure_finite(function: &'static str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::domain(function, "non-finite argument"))
    }
}
