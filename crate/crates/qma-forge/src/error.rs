use thiserror::Error;

/// Errors raised by matrix construction, register bookkeeping, and protocol
/// compilation. Numerical tolerances for the contract checks live with the
/// operations that enforce them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dense size limit exceeded: {amplitudes} amplitudes (budget {budget})")]
    SizeLimit { amplitudes: u128, budget: u128 },

    #[error("layout error: {0}")]
    Layout(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid cut: {0}")]
    Cut(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("incompatible proofs: {0}")]
    Compatibility(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
