use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("root refinement did not converge (backward error {residual:.3e} > {tol:.3e})")]
    NonConvergence { residual: f64, tol: f64 },

    #[error("polynomial degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,

    #[error("numerator and denominator share a root (separation {distance:.3e} <= {delta:.3e})")]
    Coprimality { distance: f64, delta: f64 },

    #[error("symbol is identically equal to the shift value")]
    ConstantSymbolShift,

    #[error("no rotation of the Cayley transform avoids the zeros of R*S")]
    NoValidRotation,

    #[error("oracle not applicable: {0}")]
    OracleInapplicable(&'static str),

    #[error("phase jump exceeded pi/2 at the maximal resolution of {samples} samples")]
    PhaseJump { samples: usize },

    #[error("pole at distance {distance:.3e} from the unit circle is inside the margin {margin:.1e}")]
    PoleTooClose { distance: f64, margin: f64 },

    #[error("Fourier sampling did not stabilise (last change {change:.3e} at {samples} samples)")]
    NoConvergence { change: f64, samples: usize },

    #[error("pole on the unit circle survives cancellation at {root}")]
    CancellationFailure { root: String },

    #[error("symbol has poles on the unit circle; its Fourier coefficients are undefined")]
    UnboundedSymbol,

    #[error("element is not in the Hardy space: denominator root of modulus {modulus:.6}")]
    InvalidElement { modulus: f64 },

    #[error("symbol is not real on the unit circle")]
    RealnessViolated,

    #[error("theory violation: {0}")]
    TheoryViolation(String),

    #[error("random symbol generation failed after {0} rejections")]
    GenerationFailure(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Numerical,
    Theory,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DegreeCap { .. }
            | Error::ZeroPolynomial
            | Error::Coprimality { .. }
            | Error::ConstantSymbolShift
            | Error::OracleInapplicable(_)
            | Error::InvalidElement { .. }
            | Error::RealnessViolated
            | Error::UnboundedSymbol
            | Error::PoleTooClose { .. }
            | Error::InvalidInput(_) => ErrorKind::Input,
            Error::NonConvergence { .. }
            | Error::NoValidRotation
            | Error::PhaseJump { .. }
            | Error::NoConvergence { .. }
            | Error::CancellationFailure { .. }
            | Error::GenerationFailure(_) => ErrorKind::Numerical,
            Error::TheoryViolation(_) => ErrorKind::Theory,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
