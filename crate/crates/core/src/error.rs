//! Error type shared across the toolkit.

use thiserror::Error;

/// Errors surfaced by the numerical routines.
///
/// Validation-style failures (bad grids, malformed inputs, out-of-domain
/// evaluation requests) are distinguished from genuine numerical breakdowns
/// (rank-deficient systems, inadmissible analysis windows) so callers can map
/// them to different exit codes.
#[derive(Debug, Error)]
pub enum QupError {
    /// A grid had fewer than two nodes, non-finite endpoints, or zero length.
    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    /// Mismatched lengths between grids, signals, or matrices.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A derivative of the requested order cannot be formed at the requested
    /// point (no analytic rule and the finite-difference stencil would leave
    /// the sampled domain).
    #[error("derivative unavailable: {0}")]
    DerivativeUnavailable(String),

    /// A family is numerically rank deficient where full rank was required.
    #[error("rank-deficient family: {0}")]
    RankDeficientFamily(String),

    /// A kernel or signal was evaluated outside its admissible domain.
    #[error("evaluation outside the admissible domain: {0}")]
    EvaluationDomain(String),

    /// The wavelet mother fails the admissibility (finite `C_phi`) test.
    #[error("inadmissible mother wavelet: {0}")]
    InadmissibleMother(String),

    /// A family stays numerically dependent on every neighborhood of the
    /// requested point, so no independent radius exists below the window.
    #[error("family is never independent: {0}")]
    NeverIndependent(String),

    /// An input that must have a spectral gap is numerically full-support.
    #[error("full-support input: {0}")]
    FullSupportInput(String),

    /// The probe family handed to a limit check does not span the discretized
    /// domain, so the check would be vacuous.
    #[error("probes not complete: {0}")]
    ProbesNotComplete(String),

    /// A perturbation-bound criterion evaluated to ≥ 1, so the theorem
    /// offers no guarantee for the supplied constants.
    #[error("perturbation criterion failed: {0}")]
    CriterionFailed(String),

    /// A linear system was too ill-conditioned to trust.
    #[error("ill-conditioned system: {0}")]
    IllConditioned(String),

    /// The source point set of a perturbation test is not itself a complete
    /// system for the kernel, so preservation is undefined.
    #[error("source set is not complete for the kernel: {0}")]
    SourceNotComplete(String),

    /// Malformed or unreadable external data (CSV/JSON payloads).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// I/O failure while reading or writing external data.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl QupError {
    /// Whether this error reflects invalid input rather than a numerical
    /// failure encountered on valid input.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            QupError::DegenerateGrid(_)
                | QupError::ShapeMismatch(_)
                | QupError::EvaluationDomain(_)
                | QupError::InvalidInput(_)
                | QupError::FullSupportInput(_)
                | QupError::ProbesNotComplete(_)
        )
    }
}
