//! Fractional velocities: one-sided limits of variation quotients.
//!
//! The order-`beta` velocity at `x` is `lim delta f / eps^beta`; it is finite
//! and nonzero exactly at the critical Hölder order of `f` at `x`, zero below
//! it, and divergent above it. For `f` with `n` ordinary derivatives the
//! mixed-order velocity of order `n + beta` admits three equivalent
//! computations, all provided here:
//!
//! * **definition** — extrapolate the mixed-order variation itself;
//! * **modular** — peel off the `n` smooth orders and take the order-`beta`
//!   velocity of `f^(n)`, rescaled by `(n+1)! / prod_{j=1..n}(j+beta)`;
//! * **continuous** — when `f^(n+1)` exists off the point, rescale
//!   `lim eps^(1-beta) f^(n+1)(x ± eps)` by `(n+1)! / prod_{j=0..n}(j+beta)`.
//!
//! All three send the pure power `x^(n+beta)` at the origin to `(n+1)!`.
//!
//! [`holder_exponent`] inverts the picture: it reads the Hölder order off the
//! log-log slope of `|delta f|` against the step and then evaluates the
//! velocity at that estimated order.

use crate::diffops::{self, Direction, NormalizationVariant};
use crate::error::{Error, Result};
use crate::exprlang::RealFn;
use crate::limits::{extrapolate, loglog_fit, EpsSchedule, LimitEstimate, LimitStatus};

/// How a mixed-order velocity is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Definition,
    Modular,
    Continuous,
}

impl std::fmt::Display for Route {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            out,
            "{}",
            match self {
                Route::Definition => "definition",
                Route::Modular => "modular",
                Route::Continuous => "continuous",
            }
        )
    }
}

/// A converged fractional velocity with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct FracVelocity {
    pub value: f64,
    /// Smooth part of the order.
    pub n: usize,
    /// Fractional part of the order, in `(0, 1]`.
    pub beta: f64,
    pub dir: Direction,
    pub route: Route,
    pub estimate: LimitEstimate,
}

/// Sample a quantity over the schedule, skipping leading steps where the
/// evaluation point is still outside the domain. Failures after the first
/// successful step are genuine and propagate.
pub(crate) fn collect_samples(
    schedule: &EpsSchedule,
    mut sample: impl FnMut(f64) -> Result<f64>,
) -> Result<Vec<f64>> {
    schedule.validate()?;
    let mut vals = Vec::with_capacity(schedule.count);
    let mut leading_err = None;
    for eps in schedule.steps() {
        match sample(eps) {
            Ok(v) => vals.push(v),
            Err(e) => {
                if vals.is_empty() {
                    leading_err = Some(e);
                } else {
                    return Err(e);
                }
            }
        }
    }
    if vals.len() < 4 {
        return Err(leading_err.unwrap_or(Error::InsufficientSamples {
            got: vals.len(),
            need: 4,
        }));
    }
    Ok(vals)
}

pub(crate) fn require_converged(
    context: impl FnOnce() -> String,
    estimate: LimitEstimate,
) -> Result<LimitEstimate> {
    if estimate.converged() {
        Ok(estimate)
    } else {
        Err(Error::NonConvergent {
            context: context(),
            estimate,
        })
    }
}

/// Fractional velocity of order `beta` in `(0, 1]` at `x`.
pub fn fractional_velocity(
    f: &RealFn,
    x: f64,
    beta: f64,
    dir: Direction,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<FracVelocity> {
    let samples = collect_samples(schedule, |eps| {
        Ok(diffops::frac_variation(f, x, eps, beta, dir)?.value)
    })?;
    let estimate = require_converged(
        || format!("{dir} velocity of order {beta} at {x}"),
        extrapolate(&samples, tol),
    )?;
    Ok(FracVelocity {
        value: estimate.value,
        n: 0,
        beta,
        dir,
        route: Route::Definition,
        estimate,
    })
}

/// Mixed-order velocity of order `n + beta` at `x`, by the chosen route.
pub fn mixed_velocity(
    f: &RealFn,
    x: f64,
    n: usize,
    beta: f64,
    dir: Direction,
    route: Route,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<FracVelocity> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::UnsupportedExponent { beta });
    }
    let context = || format!("{dir} velocity of order {n}+{beta} at {x} ({route} route)");
    let estimate = match route {
        Route::Definition => {
            let samples = collect_samples(schedule, |eps| {
                Ok(diffops::mixed_variation(f, x, eps, n, beta, dir)?.value)
            })?;
            extrapolate(&samples, tol)
        }
        Route::Modular => {
            let fn_n = f.derivative_n(n)?;
            let samples = collect_samples(schedule, |eps| {
                Ok(diffops::frac_variation(&fn_n, x, eps, beta, dir)?.value)
            })?;
            let scale = diffops::factorial(n + 1)
                / diffops::normalization(n, beta, NormalizationVariant::Partial);
            rescale(extrapolate(&samples, tol), scale)
        }
        Route::Continuous => {
            let fn_next = f.derivative_n(n + 1)?;
            let samples = collect_samples(schedule, |eps| {
                let v = fn_next.eval(x + dir.sign() * eps)?;
                Ok(eps.powf(1.0 - beta) * v)
            })?;
            let scale = diffops::factorial(n + 1)
                / diffops::normalization(n, beta, NormalizationVariant::Full);
            rescale(extrapolate(&samples, tol), scale)
        }
    };
    let estimate = require_converged(context, estimate)?;
    Ok(FracVelocity {
        value: estimate.value,
        n,
        beta,
        dir,
        route,
        estimate,
    })
}

fn rescale(mut estimate: LimitEstimate, scale: f64) -> LimitEstimate {
    estimate.value *= scale;
    estimate.residual_gamma *= scale.abs();
    estimate
}

/// Hölder exponent estimate at a point, with the velocity evaluated there.
#[derive(Debug, Clone, PartialEq)]
pub struct HolderReport {
    /// Log-log slope of `|delta f|` against the step, clamped to `(0, 1]`.
    pub alpha_hat: f64,
    pub dir: Direction,
    /// Velocity of order `alpha_hat` at the point. Kept as a raw estimate so
    /// a near-critical order that refuses to settle is still reportable.
    pub velocity: LimitEstimate,
    /// Root-mean-square residual of the log-log fit.
    pub fit_residual: f64,
    /// Set when the one-sided differences vanish identically (locally
    /// constant function): `alpha_hat` is 1 and the velocity is 0 by fiat.
    pub degenerate: bool,
}

// Estimated exponents are clamped into (0, 1]; slopes at or below zero mean
// the function is not Hölder continuous there and any positive order diverges.
const ALPHA_FLOOR: f64 = 1e-3;

/// Estimate the Hölder exponent of `f` at `x` from the decay of one-sided
/// differences over the schedule, then evaluate the velocity at that order.
///
/// The log-log fit uses the small-step half of the schedule: the exponent is
/// a limit property and the large-step samples only see the global shape.
pub fn holder_exponent(
    f: &RealFn,
    x: f64,
    dir: Direction,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<HolderReport> {
    schedule.validate()?;
    let mut pairs = Vec::with_capacity(schedule.count);
    let mut leading_err = None;
    for eps in schedule.steps() {
        match diffops::delta(f, x, eps, dir) {
            Ok(d) => pairs.push((eps, d)),
            Err(e) if pairs.is_empty() => leading_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    if pairs.len() < 4 {
        return Err(leading_err.unwrap_or(Error::InsufficientSamples {
            got: pairs.len(),
            need: 4,
        }));
    }
    if pairs.iter().all(|(_, d)| *d == 0.0) {
        return Ok(HolderReport {
            alpha_hat: 1.0,
            dir,
            velocity: LimitEstimate {
                value: 0.0,
                residual_gamma: 0.0,
                status: LimitStatus::Converged,
                samples_used: pairs.len(),
            },
            fit_residual: 0.0,
            degenerate: true,
        });
    }

    let tail = &pairs[pairs.len() / 2..];
    let fit = loglog_fit(tail)?;
    let alpha_hat = fit.slope.clamp(ALPHA_FLOOR, 1.0);

    let quotients: Vec<f64> = pairs
        .iter()
        .map(|(eps, d)| d / eps.powf(alpha_hat))
        .collect();
    let velocity = extrapolate(&quotients, tol);
    Ok(HolderReport {
        alpha_hat,
        dir,
        velocity,
        fit_residual: fit.rms_residual,
        degenerate: false,
    })
}
