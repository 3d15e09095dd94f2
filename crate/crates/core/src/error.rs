use thiserror::Error;

/// Errors raised across the library.
///
/// Variants split into two classes: domain errors (bad input, point outside
/// a certified region, precondition violations) and numerical failures
/// (non-convergence, tolerance not met). [`Error::is_domain`] tells them
/// apart; the CLI maps them to exit codes 2 and 3.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("index error: {0}")]
    IndexError(String),
    #[error("integrand is not of the supported form: {0}")]
    NonIntegrableForm(String),
    #[error("argument {re}{im:+}i lies on the branch cut (-inf, 0]")]
    BranchCut { re: f64, im: f64 },
    #[error("function is singular at {re}{im:+}i")]
    Singular { re: f64, im: f64 },
    #[error("point {re}{im:+}i is not in the certified {region} region for a = {a}")]
    NotCertified {
        region: &'static str,
        a: f64,
        re: f64,
        im: f64,
    },
    #[error("point {re}{im:+}i is within {radius} of the turning point z = 1")]
    TurningPoint { re: f64, im: f64, radius: f64 },
    #[error("no bracket found: {0}")]
    BracketFailure(String),
    #[error("no positive zero: phase right-hand side {rhs} is not positive")]
    NonpositiveRhs { rhs: f64 },
    #[error("trigonometric prefactor vanishes for a = {a}; use the capital-family machinery")]
    TrigZero { a: f64 },
    #[error("degenerate denominator {value:e} (threshold {tau})")]
    DegenerateDenominator { value: f64, tau: f64 },
    #[error("more than one degenerate index for a = {a}: {indices:?}")]
    MultipleDegenerates { a: f64, indices: Vec<usize> },
    #[error("derivative vanishes near theta = {theta}")]
    DerivativeNearZero { theta: f64 },
    #[error("no sign change near {0}")]
    NoSignChange(f64),
    #[error("iteration did not converge after {0} steps")]
    MaxIterations(usize),
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("tolerance not met: {0}")]
    ToleranceNotMet(String),
    #[error("series cancellation exceeds the precision budget (max term / sum = {ratio:e})")]
    CancellationOverflow { ratio: f64 },
    #[error("asymptotic series diverges before reaching tolerance (smallest term {smallest:e})")]
    DivergenceGate { smallest: f64 },
}

impl Error {
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_)
                | Error::IndexError(_)
                | Error::BranchCut { .. }
                | Error::Singular { .. }
                | Error::NotCertified { .. }
                | Error::TurningPoint { .. }
                | Error::NonpositiveRhs { .. }
                | Error::TrigZero { .. }
                | Error::DegenerateDenominator { .. }
                | Error::DerivativeNearZero { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
