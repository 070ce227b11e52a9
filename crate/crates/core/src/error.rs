use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{op}: {name} = {value} is outside the domain ({expected})")]
    Domain {
        op: &'static str,
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// An iterative method exhausted its budget before meeting its tolerance.
    #[error("{op}: no convergence after {iterations} refinements (error estimate {estimate:e}, target {target:e})")]
    Convergence {
        op: &'static str,
        iterations: usize,
        estimate: f64,
        target: f64,
    },

    /// The cycle does not operate in the requested mode (engine or refrigerator).
    #[error("{op}: cycle is not in the {regime} regime ({detail})")]
    Regime {
        op: &'static str,
        regime: &'static str,
        detail: String,
    },

    /// The objective showed no variation over the search interval.
    #[error("maximize_scalar: objective is flat on [{lo}, {hi}] (spread {spread:e})")]
    FlatObjective { lo: f64, hi: f64, spread: f64 },

    /// A configuration value failed validation.
    #[error("invalid `{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

impl Error {
    pub(crate) fn domain(
        op: &'static str,
        name: &'static str,
        value: f64,
        expected: &'static str,
    ) -> Self {
        Error::Domain {
            op,
            name,
            value,
            expected,
        }
    }

    pub(crate) fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            key: key.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
