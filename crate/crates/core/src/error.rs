use thiserror::Error;

/// Errors produced by schedule evaluation, synthesis, propagation and
/// sensitivity integration.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("unbounded derivative at s = {s}")]
    UnboundedDerivative { s: f64 },

    #[error("evaluator returned a non-unitary matrix (defect {defect:.3e})")]
    InvalidEvaluator { defect: f64 },

    #[error("invalid hamiltonian: {0}")]
    InvalidHamiltonian(String),

    #[error("invalid preset: {0}")]
    InvalidPreset(String),

    #[error("quadrature failed: achieved {achieved:.3e}, requested {requested:.3e} ({context})")]
    QuadratureFailure {
        achieved: f64,
        requested: f64,
        context: String,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
