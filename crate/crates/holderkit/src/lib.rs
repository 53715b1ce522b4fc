//! Numerics for functions that are Hölder continuous rather than smooth:
//! fractional velocities, mixed-order and compound Taylor expansions,
//! derivative regularization, and the associated chain rules.
//!
//! The toolkit is organized bottom-up:
//!
//! * [`exprlang`] — a small expression language (`x`, arithmetic, powers,
//!   elementary functions) with symbolic differentiation, plus [`exprlang::RealFn`],
//!   the function handle every numeric routine consumes.
//! * [`diffops`] — finite differences, fractional variation quotients, Taylor
//!   polynomials, and the mixed-order variation of order `n + beta`.
//! * [`limits`] — one-sided limit extrapolation from a geometric grid of
//!   step sizes, with explicit convergence diagnostics.
//! * [`velocity`] — fractional velocities of order `beta` in `(0, 1]` and of
//!   mixed order `n + beta`, together with Hölder exponent estimation.
//! * [`expansion`] — fractional Taylor coefficients about a point of given
//!   Hölder order, compound expansions of `g(x^alpha)`, series evaluation, and
//!   approximation-error curves.
//! * [`regularize`] — variations of compositions, regularized derivatives
//!   (ordinary and multi-exponent), the fractional l'Hôpital rule, and the
//!   orthogonality check between a velocity and its regularized complement.
//! * [`ito`] — quadratic covariation and the compound (Taylor–Itô style)
//!   differentiation rule for `f(x, w(x))` with `w` of Hölder order 1/2.
//! * [`cli`] — the `holderkit` command-line front end.
//!
//! Every limit-based quantity reports its convergence status instead of
//! silently returning a number: a diverging quotient is an answer, not a bug.

pub mod cli;
mod dd;
pub mod diffops;
pub mod error;
pub mod expansion;
pub mod exprlang;
pub mod ito;
pub mod limits;
pub mod regularize;
pub mod velocity;

pub use error::{Error, ParseError, Result};
pub use exprlang::RealFn;
pub use limits::{EpsSchedule, LimitEstimate, LimitStatus};
