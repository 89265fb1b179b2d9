//! Error type shared by all modules of the crate.

use crate::protocol::RegimeReport;

/// Errors produced by state construction, evolution and the protocol.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// The photon-number cutoff cannot hold the requested state: the
    /// probability mass beyond `n_max` exceeds the configured tolerance.
    #[error(
        "truncation too small: tail mass {tail:.3e} beyond n_max = {n_max} \
         exceeds tolerance {tolerance:.3e}"
    )]
    TruncationTooSmall {
        n_max: usize,
        tail: f64,
        tolerance: f64,
    },

    /// Two objects that must live in the same space do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// An operator handed to a Hermitian-only routine is not Hermitian.
    #[error("operator is not Hermitian: max |H - H^dag| entry = {deviation:.3e}")]
    NonHermitianInput { deviation: f64 },

    /// The selected measurement branch carries too little amplitude to
    /// renormalize (norm below 1e-14).
    #[error("measurement branch '{level}' has norm {norm:.3e}, cannot renormalize")]
    ZeroProbabilityBranch { level: char, norm: f64 },

    /// The degenerate Raman validity conditions are not satisfied at the
    /// requested operating point. The failing report is embedded.
    #[error(
        "degenerate Raman regime violated: detuning ratio {:.3e} (needs >= {margin}), \
         time ratio {:.3e} (needs <= {})",
        .report.detuning_ratio,
        .report.time_ratio,
        1.0 / .report.margin,
        margin = .report.margin
    )]
    RegimeViolation { report: RegimeReport },

    /// A constructor or operation precondition was violated.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
