//! Crate-wide error type.
//!
//! Numeric routines distinguish *usage* failures (bad expressions, exponents
//! outside `(0, 1]`, missing derivatives) from *mathematical* outcomes (a
//! limit that genuinely diverges or oscillates). The latter travel as
//! [`Error::NonConvergent`] and carry the full [`LimitEstimate`] so callers
//! can still report the value, status, and residual that were observed.

use crate::limits::LimitEstimate;

/// Syntax error produced by the expression parser.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {offset}: expected {}, found {found}", .expected.join(" | "))]
pub struct ParseError {
    /// Byte offset into the source string where the error was detected.
    pub offset: usize,
    /// Tokens that would have been accepted at this position.
    pub expected: Vec<String>,
    /// What was actually found.
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    /// Evaluation produced a non-finite value (pole, negative radicand,
    /// logarithm of a non-positive number, point outside the declared domain).
    #[error("evaluation left the real domain at x = {x}")]
    Domain { x: f64 },

    /// A fractional order was outside the admissible interval `(0, 1]`.
    #[error("fractional order must lie in (0, 1], got {beta}")]
    UnsupportedExponent { beta: f64 },

    /// A symbolic derivative was requested from a native function that has no
    /// registered derivative of that order.
    #[error("missing derivative of order {order}: native function without a registered derivative")]
    MissingDerivative { order: usize },

    /// Too few usable samples survived domain filtering to extrapolate.
    #[error("only {got} usable samples (need at least {need}); widen the step schedule")]
    InsufficientSamples { got: usize, need: usize },

    /// Input data admits no meaningful answer (e.g. log-log fit of zeros).
    #[error("degenerate data: {0}")]
    Degenerate(String),

    /// A required limit failed to converge. The estimate retains the last
    /// value, the residual, and the diagnosed status.
    #[error("{context}: limit did not converge (status {}, value {:e}, residual {:e})",
            .estimate.status, .estimate.value, .estimate.residual_gamma)]
    NonConvergent {
        context: String,
        estimate: LimitEstimate,
    },

    /// The denominator velocity in a ratio rule vanished.
    #[error("denominator velocity is zero; the ratio is undetermined")]
    ZeroDenominator,

    /// A documented precondition was violated by the inputs.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Two independent computations of the same quantity disagreed beyond
    /// tolerance; reported rather than silently preferring one.
    #[error("{context}: routes disagree ({lhs:e} vs {rhs:e}, tolerance {tol:e})")]
    RouteDisagreement {
        context: String,
        lhs: f64,
        rhs: f64,
        tol: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
