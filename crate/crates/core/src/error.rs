use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the response models, integrators and the CLI layer.
#[derive(Debug, Error)]
pub enum Error {
    /// A response function was evaluated on (or numerically at) one of its poles.
    #[error("pole hit at omega = {omega:e} (denominator magnitude {magnitude:e})")]
    PoleProximity { omega: f64, magnitude: f64 },

    /// A closed-form expression was evaluated inside the exclusion radius of a pole.
    #[error("Omega = {omega:e} lies within {radius:e} of the pole at {pole:e}")]
    PoleExclusion { omega: f64, pole: f64, radius: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Adaptive quadrature ran out of refinement budget.
    #[error("quadrature did not converge: estimate {estimate:e}, error estimate {error:e} ({reason})")]
    NonConvergence {
        estimate: f64,
        error: f64,
        reason: &'static str,
    },

    /// The imaginary part of a real-valued energy integral was not negligible.
    #[error("imaginary residue {imag:e} exceeds tolerance {bound:e} (real part {real:e})")]
    ImaginaryResidue { real: f64, imag: f64, bound: f64 },

    #[error("Matsubara sum not converged after {terms} terms: partial sum {partial:e}, last term {last_term:e}")]
    MatsubaraNonConvergence {
        terms: usize,
        partial: f64,
        last_term: f64,
    },

    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    /// True for failures of a numerical algorithm to reach its tolerance.
    pub fn is_convergence_failure(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::MatsubaraNonConvergence { .. }
                | Error::ImaginaryResidue { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
