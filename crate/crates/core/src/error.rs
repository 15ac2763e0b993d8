use thiserror::Error;

/// Errors raised by the evaluators, samplers, and hull routines.
///
/// Every message starts with `module::operation` so that callers (the CLI in
/// particular) can report where a failure originated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: argument out of domain: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("{op}: no convergence after {iterations} iterations: {detail}")]
    Convergence {
        op: &'static str,
        iterations: usize,
        detail: String,
    },

    #[error("{op}: {groups} subset groups exceed the budget of {budget}")]
    Budget {
        op: &'static str,
        groups: u128,
        budget: u128,
    },

    #[error("{op}: degenerate point configuration: {detail}")]
    Degenerate { op: &'static str, detail: String },

    #[error("geometry::mc_estimate: degeneracy rate {rate:.3e} above the abort threshold ({resampled} resamples)")]
    DegeneracyRate { rate: f64, resampled: u64 },
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    /// True for failures of a numerical method (non-convergence, budget),
    /// as opposed to invalid input.
    pub fn is_numeric(&self) -> bool {
        !matches!(self, Error::Domain { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
