use thiserror::Error;

use crate::precision::Real;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Carries the best estimate reached before giving up.
    #[error("{what} did not converge after {steps} steps (best estimate {best}, error estimate {error_estimate:e})")]
    NoConvergence {
        what: String,
        steps: usize,
        best: Real,
        error_estimate: f64,
    },

    #[error("integrand returned {value} at abscissa {abscissa}")]
    Integrand { abscissa: String, value: String },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("unknown identifier `{id}`{}", fmt_suggestions(.suggestions))]
    NotFound { id: String, suggestions: Vec<String> },

    #[error("functional equation violated: asymmetry {asymmetry:e} exceeds {threshold:e}")]
    FunctionalEquation { asymmetry: f64, threshold: f64 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

fn fmt_suggestions(s: &[String]) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!("; did you mean {}?", s.join(", "))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
