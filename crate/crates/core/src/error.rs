use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric (relative defect {defect:.3e})")]
    NotSymmetric { defect: f64 },

    #[error("multi-index entry {entry} exceeds the per-slot cap {cap}")]
    CapExceeded { entry: usize, cap: usize },

    #[error("total order {order} exceeds the oracle cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },

    #[error("singular matrix: {0}")]
    Singular(&'static str),

    #[error("degenerate overlap: the combined matrix rho is singular")]
    DegenerateOverlap,

    #[error("matrix is not block diagonal at split {split} (off-block magnitude {defect:.3e})")]
    NotBlockDiagonal { split: usize, defect: f64 },

    #[error("uncertainty relation violated: min eigenvalue of M + iJ/2 is {min_eigenvalue:.3e}")]
    UncertaintyViolation { min_eigenvalue: f64 },

    #[error("probability has imaginary residue {im:.3e} (real part {re:.3e})")]
    ImaginaryResidue { re: f64, im: f64 },

    #[error("second half of B is not the conjugate of the first half (defect {defect:.3e})")]
    ConjugacyViolation { defect: f64 },

    #[error("index {index} out of range for {len} modes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("odd cat state requires a nonzero amplitude")]
    OddCatAtOrigin,

    #[error("annihilation relation requires a nonzero amplitude")]
    ZeroAmplitude,

    #[error("mode {mode} has zero mean photon number")]
    ZeroMeanPhoton { mode: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid function is not Hermitian (residual {residual:.3e})")]
    NonHermitian { residual: f64 },

    #[error("insufficient grid support (tail mass {tail_mass:.3e})")]
    InsufficientSupport { tail_mass: f64 },

    #[error("unsupported number of modes {modes} (maximum {max})")]
    UnsupportedModes { modes: usize, max: usize },

    #[error("ill-conditioned transform: {0}")]
    ConditioningFailure(String),

    #[error("map is not symplectic (defect {defect:.3e})")]
    NotSymplectic { defect: f64 },

    #[error("Wronskian drift {drift:.3e} exceeds budget {budget:.3e}")]
    WronskianDrift { drift: f64, budget: f64 },

    #[error("caustic: epsilon vanishes at t = {t}")]
    Caustic { t: f64 },

    #[error("time {t} outside trajectory range [{start}, {end}]")]
    TimeOutOfRange { t: f64, start: f64, end: f64 },

    #[error("Fock truncation tail mass {tail_mass:.3e} exceeds tolerance")]
    TruncationFailure { tail_mass: f64 },
}

impl Error {
    /// Numerical-health failures, as opposed to malformed input.
    pub fn is_numerical_health(&self) -> bool {
        matches!(
            self,
            Error::UncertaintyViolation { .. }
                | Error::ImaginaryResidue { .. }
                | Error::WronskianDrift { .. }
                | Error::Singular(_)
                | Error::DegenerateOverlap
                | Error::NonHermitian { .. }
                | Error::InsufficientSupport { .. }
                | Error::ConditioningFailure(_)
                | Error::Caustic { .. }
                | Error::TruncationFailure { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
