use thiserror::Error;

/// Errors raised by the locus solver, the representation builder and the
/// certificate producers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid pretzel parameters: {0}")]
    InvalidKnot(String),

    #[error("unsupported knot P({a1},{a2},{a3}): a1 = 1 is only handled for P(1,1,1)")]
    Unsupported { a1: u32, a2: u32, a3: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("r3 = {r3} is outside the open bracket (2, {r1})")]
    DegenerateBracket { r1: f64, r3: f64 },

    #[error("bisection did not converge within {max_iter} iterations")]
    NoConvergence { max_iter: usize },

    #[error("T(r1) never reached 4 before r1 = {limit}")]
    NoCrossing { limit: f64 },

    #[error("trace system is singular (condition estimate {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("constructed X3 is not unimodular: |det - 1| = {residual:e}")]
    NonUnimodular { residual: f64 },

    #[error("meridian trace squared T = {t_squared} is not in (0, 4)")]
    NotElliptic { t_squared: f64 },

    #[error("longitude denominator vanished (|alpha M - beta/M| = {magnitude:e})")]
    DegenerateDenominator { magnitude: f64 },

    #[error("slope {0} is outside the computed range (-inf, 0) u (0, 1)")]
    OutOfRange(String),

    #[error("no sign change of the slope residual found on the elliptic interval")]
    NoBracket,

    #[error("cover order {n} is below the threshold {threshold}")]
    BelowThreshold { n: u32, threshold: u32 },
}

impl Error {
    /// Process exit code for this error: 2 for rejected input, 1 for
    /// numerical or verification failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidKnot(_)
            | Error::Unsupported { .. }
            | Error::InvalidInput(_)
            | Error::OutOfRange(_)
            | Error::BelowThreshold { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
