use crate::fock::ModeBasis;

/// Unified error type for all simulator operations.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Two states were combined without sharing a polarization basis.
    #[error("basis mismatch: {left:?} vs {right:?}; rotate one operand first")]
    BasisMismatch { left: ModeBasis, right: ModeBasis },

    /// Truncated probability mass exceeds the configured tolerance.
    #[error(
        "under-truncated state: tail deficit {deficit:.3e} exceeds tolerance {tolerance:.3e}; \
         retry with cutoff ≥ {suggested_cutoff}"
    )]
    UnderTruncated {
        deficit: f64,
        tolerance: f64,
        suggested_cutoff: usize,
    },

    /// Negative, NaN, or infinite amplifier gain.
    #[error("invalid gain g = {g}: must be finite and ≥ 0")]
    InvalidGain { g: f64 },

    /// Detection efficiency outside [0, 1].
    #[error("invalid efficiency {eta}: must lie in [0, 1]")]
    InvalidEfficiency { eta: f64 },

    /// Superposition coefficients that should satisfy |α|² + |β|² = 1 do not.
    #[error("coefficients not normalized: |α|² + |β|² = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    /// A projection onto an outcome of (numerically) zero probability.
    #[error("outcome has zero probability: {context}")]
    ZeroProbability { context: String },

    /// A probability table that is negative, non-normalized, or empty.
    #[error("invalid probabilities: {context}")]
    InvalidProbabilities { context: String },

    /// A matrix handed to the concurrence estimator is not a density matrix.
    #[error("invalid density matrix: {context}")]
    InvalidDensityMatrix { context: String },

    /// A fringe fit without enough information to determine the visibility.
    #[error("degenerate fit: {context}")]
    DegenerateFit { context: String },

    /// A scalar parameter outside its documented domain.
    #[error("invalid parameter {name} = {value}: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// Configuration file or schema problem.
    #[error("config error: {0}")]
    Config(String),

    /// Filesystem problem while emitting results.
    #[error("i/o error: {0}")]
    Io(String),

    /// A parameter combination the implementation deliberately does not support.
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
