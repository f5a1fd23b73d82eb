//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

/// Everything that can go wrong inside the library.
///
/// Callers that need to map failures onto process exit codes can rely on the
/// split: `InvalidArgument`/`MemoryCap` are configuration mistakes, the rest
/// are numeric failures discovered at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Precondition violated by a caller-supplied value.
    InvalidArgument(String),
    /// Site index outside `0..n`.
    IndexOutOfRange { index: usize, n: usize },
    /// Requested chain exceeds the state-vector memory cap.
    MemoryCap { n: usize, max: usize },
    /// An iterative solver ran out of iterations.
    NonConvergence { what: &'static str, iterations: usize },
    /// Beat-note detuning sits inside the guard band around a phonon mode.
    ModeResonance { mode: usize, distance: f64, guard: f64 },
    /// The adaptive propagator could not reach its tolerance.
    AccuracyFailure { step: usize, estimate: f64 },
    /// Coupling matrix is not a positive power law (log fit undefined).
    NonPowerLaw,
    /// A fit was requested with fewer points than parameters allow.
    InsufficientPoints { needed: usize, got: usize },
    /// Spatial-decay fit found no usable region outside the light cone.
    InsufficientOutsideRegion { got: usize },
    /// Fit input was degenerate (zero variance, nonpositive values, β ≤ 0…).
    DegenerateFit(String),
    /// Revival search window contains no samples.
    EmptyWindow,
    /// Too few shots for the requested estimator.
    InsufficientShots { needed: usize, got: usize },
    /// Array arguments have inconsistent dimensions.
    ShapeMismatch(String),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
            CoreError::IndexOutOfRange { index, n } => {
                write!(f, "site index {index} out of range for {n} spins")
            }
            CoreError::MemoryCap { n, max } => {
                write!(f, "{n} spins exceeds the {max}-spin state-vector cap")
            }
            CoreError::NonConvergence { what, iterations } => {
                write!(f, "{what} did not converge within {iterations} iterations")
            }
            CoreError::ModeResonance { mode, distance, guard } => write!(
                f,
                "detuning within guard band of mode {mode}: |μ−ω| = {distance:.3e} < {guard:.3e}"
            ),
            CoreError::AccuracyFailure { step, estimate } => write!(
                f,
                "propagator step {step} failed tolerance (error estimate {estimate:.3e})"
            ),
            CoreError::NonPowerLaw => {
                write!(f, "couplings contain nonpositive entries; power-law fit undefined")
            }
            CoreError::InsufficientPoints { needed, got } => {
                write!(f, "fit needs at least {needed} points, got {got}")
            }
            CoreError::InsufficientOutsideRegion { got } => write!(
                f,
                "only {got} separations outside the light cone; need at least 3"
            ),
            CoreError::DegenerateFit(m) => write!(f, "degenerate fit: {m}"),
            CoreError::EmptyWindow => write!(f, "search window contains no samples"),
            CoreError::InsufficientShots { needed, got } => {
                write!(f, "estimator needs at least {needed} shots, got {got}")
            }
            CoreError::ShapeMismatch(m) => write!(f, "shape mismatch: {m}"),
        }
    }
}

impl core::error::Error for CoreError {}

impl CoreError {
    /// True for errors that indicate a bad configuration rather than a
    /// numeric failure at run time.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            CoreError::InvalidArgument(_)
                | CoreError::IndexOutOfRange { .. }
                | CoreError::MemoryCap { .. }
                | CoreError::ShapeMismatch(_)
        )
    }
}
