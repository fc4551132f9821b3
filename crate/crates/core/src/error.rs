use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::Matrix;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module.
///
/// [`Error::reason`] gives a stable kebab-case tag for machine consumption.
#[derive(Debug, Clone)]
pub enum Error {
    /// Shape mismatch (non-square input, wrong vector length, ragged rows).
    Dimension(String),
    /// NaN or infinite entry where finite numbers are required.
    NonFinite(String),
    /// Bad configuration: unknown parameter key, invalid spec field.
    Config(String),
    /// Argument outside the domain of the operation.
    Domain(String),
    /// Caller violated a documented precondition.
    Contract(String),
    /// QR iteration did not converge; carries the partially reduced form.
    Convergence { iterations: usize, partial: Matrix },
    /// An eigenpair failed the residual bound.
    Residual { index: usize, residual: f64, bound: f64 },
    /// Eigenvalues too close to normalize; route to the Jordan solver.
    IllConditioned { pairs: Vec<(usize, usize)> },
    /// Shifted matrix is not singular with a one-dimensional defect.
    NotAnEp(String),
    /// Gap minimization stagnated above tolerance.
    NoEpFound { best: (f64, f64), gap: f64 },
    /// Continuation step lost track of a branch.
    StepSize { step: usize, overlap: f64 },
    /// Energy sits on (or too near) a pole of the resolvent.
    Pole { energy: f64 },
    /// Phase grid too coarse to unwrap unambiguously.
    GridTooCoarse { index: usize, step: f64 },
    /// Singular linear system.
    Singular,
}

impl Error {
    pub fn reason(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::NonFinite(_) => "non-finite",
            Error::Config(_) => "config",
            Error::Domain(_) => "domain",
            Error::Contract(_) => "contract",
            Error::Convergence { .. } => "non-convergence",
            Error::Residual { .. } => "residual",
            Error::IllConditioned { .. } => "ill-conditioned",
            Error::NotAnEp(_) => "not-an-EP",
            Error::NoEpFound { .. } => "no-EP-found",
            Error::StepSize { .. } => "step-size",
            Error::Pole { .. } => "pole",
            Error::GridTooCoarse { .. } => "grid-too-coarse",
            Error::Singular => "singular",
        }
    }

    /// True for input/configuration problems, false for numerical failures.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Dimension(_)
                | Error::NonFinite(_)
                | Error::Config(_)
                | Error::Domain(_)
                | Error::Contract(_)
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(m) => write!(f, "dimension mismatch: {m}"),
            Error::NonFinite(m) => write!(f, "non-finite value: {m}"),
            Error::Config(m) => write!(f, "configuration error: {m}"),
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Contract(m) => write!(f, "contract violation: {m}"),
            Error::Convergence { iterations, partial } => write!(
                f,
                "QR iteration did not converge after {iterations} iterations (n = {})",
                partial.dim()
            ),
            Error::Residual { index, residual, bound } => write!(
                f,
                "eigenpair {index} residual {residual:e} exceeds bound {bound:e}"
            ),
            Error::IllConditioned { pairs } => {
                write!(f, "near-degenerate eigenvalues at index pairs {pairs:?}")
            }
            Error::NotAnEp(m) => write!(f, "not an exceptional point: {m}"),
            Error::NoEpFound { best, gap } => write!(
                f,
                "no exceptional point found; best point ({:e}, {:e}) with gap {gap:e}",
                best.0, best.1
            ),
            Error::StepSize { step, overlap } => write!(
                f,
                "branch overlap {overlap:.3e} below floor at step {step}; increase the number of steps"
            ),
            Error::Pole { energy } => write!(f, "energy {energy:e} coincides with a resolvent pole"),
            Error::GridTooCoarse { index, step } => write!(
                f,
                "phase step {step:.3} rad at grid index {index} is ambiguous; refine the energy grid"
            ),
            Error::Singular => write!(f, "singular linear system"),
        }
    }
}

impl core::error::Error for Error {}
