use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("branch cut: {0}")]
    Branch(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("exact mode limited to {cap} vertices (got {volume}); use the floating log-determinant")]
    CapExceeded { volume: u64, cap: u64 },
    #[error("quadrature did not converge after {evaluations} evaluations: estimate {estimate_re} + {estimate_im}i, error bound {error_bound}")]
    NonConvergence {
        estimate_re: f64,
        estimate_im: f64,
        error_bound: f64,
        evaluations: usize,
    },
    #[error("integrand is not finite at t = {0}")]
    NonFinite(f64),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::Domain(_) => "domain",
            Error::Pole(_) => "pole",
            Error::Branch(_) => "branch",
            Error::Overflow(_) => "overflow",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::NonConvergence { .. } => "non_convergence",
            Error::NonFinite(_) => "non_finite",
        }
    }

    /// True for failures of a numerical method, as opposed to rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::NonFinite(_) | Error::Overflow(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
