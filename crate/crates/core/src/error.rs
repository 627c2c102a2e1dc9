//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by Hamiltonian construction, spectral analysis,
/// propagation, protocol evaluation, and optimization.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A numeric input was NaN or infinite.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested parameter regime is outside the family's domain
    /// (delta_omega = 0 or gamma2 = 0, where the eigenvalue-split
    /// constraint degenerates).
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// A closed-form expression is singular at these parameters
    /// (gamma1 + gamma2 = 0, or a vanishing site gamma).
    #[error("singular parameter: {0}")]
    SingularParameter(String),

    /// Two eigenvalues are too close for a stable biorthogonal
    /// decomposition.
    #[error("exceptional point: eigenvalues separated by {separation:.3e} (need > {min_separation:.1e})")]
    ExceptionalPoint {
        separation: f64,
        min_separation: f64,
    },

    /// Spectral validation failed (residual, biorthogonality, or trace
    /// check), which indicates the matrix is outside the supported
    /// numerical domain.
    #[error("spectral validation failed: {0}")]
    SpectralValidation(String),

    /// A propagation or scenario setting violates its contract
    /// (step size too large for the stability bound, window too narrow,
    /// non-positive dt, ...).
    #[error("configuration error: {0}")]
    Configuration(String),

    /// A state vector and a Hamiltonian (or two states) have different
    /// dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The target population never reached one within the search horizon.
    #[error("no crossing: target population reached {best:.6} within horizon {horizon} (need 1)")]
    NoCrossing { best: f64, horizon: f64 },

    /// The optimizer exhausted its budget without a feasible candidate;
    /// carries the full evaluation history for diagnosis.
    #[error("no feasible point within budget ({evaluations} evaluations)")]
    NoFeasiblePoint {
        evaluations: usize,
        history: Vec<crate::optimize::HistoryEntry>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
