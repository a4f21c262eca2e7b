use thiserror::Error;

/// Errors raised by every computation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size: {what} = {requested} exceeds cap {cap}")]
    Size {
        what: &'static str,
        requested: u64,
        cap: u64,
    },

    #[error("domain: {0}")]
    Domain(String),

    #[error("precision: {0}")]
    Precision(String),

    #[error("convergence: {what} did not converge after {iterations} iterations")]
    Convergence { what: &'static str, iterations: usize },

    #[error("truncation: series stopped after {terms} terms with relative tail bound {tail_bound:e}")]
    Truncation { terms: usize, tail_bound: f64 },

    #[error("budget: estimated {estimate:e} work units exceeds budget {budget:e}")]
    Budget { estimate: f64, budget: f64 },

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable tag used on the CLI's stderr line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Size { .. } => "size",
            Error::Domain(_) => "domain",
            Error::Precision(_) => "precision",
            Error::Convergence { .. } => "convergence",
            Error::Truncation { .. } => "truncation",
            Error::Budget { .. } => "budget",
            Error::Config(_) => "config",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
