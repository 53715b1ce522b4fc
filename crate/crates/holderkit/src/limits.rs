//! One-sided limits `lim_{eps -> 0+} v(eps)` estimated from samples on a
//! geometric step grid.
//!
//! The workhorse is [`extrapolate`]: given samples `v(eps_k)` on the grid
//! `eps_k = eps0 * ratio^k`, it first screens for the two failure shapes that
//! must never be "accelerated" — monotone growth (a genuinely divergent
//! quotient) and non-shrinking sign alternation (an oscillating one) — and
//! otherwise runs iterated Aitken delta-squared acceleration. For a sequence
//! of the form `L + c * eps^p` each Aitken stage is algebraically exact, so
//! pure-power quotients (the common case for Hölder-type variations) come
//! back at machine precision; mixtures of powers lose one power per stage.
//!
//! Convergence is judged by the residual `gamma`, the magnitude of the last
//! acceleration step. Divergence and oscillation are judged only from the
//! raw samples, never from the tolerance, so tightening `tol` can demote a
//! verdict from converged to inconclusive but can never manufacture a
//! divergence.

use crate::error::{Error, Result};
use std::fmt;

/// Default residual tolerance for convergence verdicts.
pub const DEFAULT_TOL: f64 = 1e-7;

/// Geometric step schedule `eps_k = eps0 * ratio^k`, `k = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsSchedule {
    /// Largest step, used first.
    pub eps0: f64,
    /// Geometric decay factor in `(0, 1)`.
    pub ratio: f64,
    /// Number of steps.
    pub count: usize,
}

impl Default for EpsSchedule {
    fn default() -> Self {
        EpsSchedule {
            eps0: 0.125,
            ratio: 0.5,
            count: 16,
        }
    }
}

impl EpsSchedule {
    pub fn new(eps0: f64, ratio: f64, count: usize) -> Result<Self> {
        let s = EpsSchedule { eps0, ratio, count };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps0.is_finite() && self.eps0 > 0.0) {
            return Err(Error::Precondition(format!(
                "schedule eps0 must be positive, got {}",
                self.eps0
            )));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::Precondition(format!(
                "schedule ratio must lie in (0, 1), got {}",
                self.ratio
            )));
        }
        if self.count < 4 {
            return Err(Error::Precondition(format!(
                "schedule needs at least 4 steps, got {}",
                self.count
            )));
        }
        Ok(())
    }

    /// Steps from largest to smallest.
    pub fn steps(&self) -> impl Iterator<Item = f64> + '_ {
        let (eps0, ratio) = (self.eps0, self.ratio);
        (0..self.count).map(move |k| eps0 * ratio.powi(k as i32))
    }
}

/// Verdict attached to every extrapolated limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitStatus {
    /// Residual fell at or below the tolerance.
    Converged,
    /// Samples grow monotonically with a consistent sign of change.
    Diverged,
    /// Samples alternate without shrinking.
    Oscillating,
    /// No failure shape detected, but the residual stayed above tolerance.
    Inconclusive,
}

impl fmt::Display for LimitStatus {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LimitStatus::Converged => "converged",
            LimitStatus::Diverged => "diverged",
            LimitStatus::Oscillating => "oscillating",
            LimitStatus::Inconclusive => "inconclusive",
        };
        write!(out, "{s}")
    }
}

/// An extrapolated one-sided limit with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    /// Best available value (the last accelerated entry; for a divergent
    /// sequence, the most extreme raw sample).
    pub value: f64,
    /// Residual `gamma`: magnitude of the final acceleration step, the
    /// error proxy the status is judged against.
    pub residual_gamma: f64,
    pub status: LimitStatus,
    /// Raw samples that entered the extrapolation.
    pub samples_used: usize,
}

impl LimitEstimate {
    pub fn converged(&self) -> bool {
        self.status == LimitStatus::Converged
    }
}

// Tail differences below this size relative to the sample scale are
// floating-point noise, not divergence: a cancelled kernel leaves residuals
// of order 1e-12 that *grow* as eps shrinks without meaning anything, and a
// quotient of rounded values sitting at 0.5 carries the same growing noise
// a dozen digits down.
const DIVERGENCE_FLOOR: f64 = 1e-8;
// Median |d_{k+1}/d_k| at or above this over the tail counts as growth.
const GROWTH_RATIO: f64 = 1.01;
// Alternating differences whose magnitude ratio stays at or above this are
// treated as sustained oscillation; below it they shrink and are accelerable.
const OSCILLATION_RATIO: f64 = 0.95;
// Aitken acceleration is only valid for difference ratios strictly inside the
// unit circle. A ratio at or above this bound means the sequence is drifting
// or diverging too slowly to flag; accelerating it anyway would "converge" to
// the fixed point of the geometric model instead of a limit that exists.
const UNIT_GATE: f64 = 1.0 - 1e-4;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v[v.len() / 2]
}

/// The tail difference ratio must sit strictly inside the unit circle for an
/// Aitken stage to be meaningful. Zero differences mean the row already sits
/// at its limit; that is always acceptable.
fn ratio_accelerable(row: &[f64]) -> bool {
    let diffs: Vec<f64> = row.windows(2).map(|w| w[1] - w[0]).collect();
    let tail = &diffs[diffs.len().saturating_sub(5)..];
    let ratios: Vec<f64> = tail
        .windows(2)
        .filter(|w| w[0] != 0.0 && w[1] != 0.0)
        .map(|w| w[1] / w[0])
        .collect();
    if ratios.is_empty() {
        return true;
    }
    median(ratios).abs() < UNIT_GATE
}

/// Extrapolate `lim v(eps)` from samples ordered largest step first.
pub fn extrapolate(samples: &[f64], tol: f64) -> LimitEstimate {
    let n = samples.len();
    if n == 0 {
        return LimitEstimate {
            value: f64::NAN,
            residual_gamma: f64::INFINITY,
            status: LimitStatus::Inconclusive,
            samples_used: 0,
        };
    }
    if n == 1 {
        return LimitEstimate {
            value: samples[0],
            residual_gamma: f64::INFINITY,
            status: LimitStatus::Inconclusive,
            samples_used: 1,
        };
    }

    let diffs: Vec<f64> = samples.windows(2).map(|w| w[1] - w[0]).collect();

    // Tail window for shape detection.
    let t = diffs.len().min(5);
    let tail = &diffs[diffs.len() - t..];
    let tail_vals = &samples[n - (t + 1)..];

    if diffs.iter().all(|d| *d == 0.0) {
        return LimitEstimate {
            value: samples[n - 1],
            residual_gamma: 0.0,
            status: LimitStatus::Converged,
            samples_used: n,
        };
    }

    if t >= 3 && tail.iter().all(|d| *d != 0.0) {
        let ratios: Vec<f64> = tail.windows(2).map(|w| (w[1] / w[0]).abs()).collect();
        let med = median(ratios.clone());
        let same_sign = tail.windows(2).all(|w| w[0].signum() == w[1].signum());
        let growing_magnitude = tail_vals.windows(2).all(|w| w[1].abs() > w[0].abs());
        let noise_scale = DIVERGENCE_FLOOR * (1.0 + samples[n - 1].abs());
        if same_sign
            && growing_magnitude
            && med >= GROWTH_RATIO
            && diffs[diffs.len() - 1].abs() >= noise_scale
        {
            return LimitEstimate {
                value: samples[n - 1],
                residual_gamma: diffs[diffs.len() - 1].abs(),
                status: LimitStatus::Diverged,
                samples_used: n,
            };
        }
        let alternating = tail.windows(2).all(|w| w[0].signum() != w[1].signum());
        let last_d = diffs[diffs.len() - 1].abs();
        if alternating && med >= OSCILLATION_RATIO && last_d >= noise_scale {
            return LimitEstimate {
                value: samples[n - 1],
                residual_gamma: last_d,
                status: LimitStatus::Oscillating,
                samples_used: n,
            };
        }
    }

    // Iterated Aitken delta-squared, kept while it improves the residual.
    let mut row: Vec<f64> = samples.to_vec();
    let mut value = row[row.len() - 1];
    let mut resid = diffs[diffs.len() - 1].abs();
    while row.len() >= 3 {
        if !ratio_accelerable(&row) {
            break;
        }
        let mut next = Vec::with_capacity(row.len() - 2);
        let mut aborted = false;
        for k in 0..row.len() - 2 {
            let d1 = row[k + 1] - row[k];
            let d2 = row[k + 2] - row[k + 1];
            let den = d2 - d1;
            if den == 0.0 {
                if d2 == 0.0 {
                    // Locally constant: already at the limit.
                    next.push(row[k + 2]);
                    continue;
                }
                aborted = true;
                break;
            }
            let accelerated = row[k + 2] - d2 * d2 / den;
            if !accelerated.is_finite() {
                aborted = true;
                break;
            }
            next.push(accelerated);
        }
        if aborted || next.is_empty() {
            break;
        }
        let next_resid = if next.len() >= 2 {
            (next[next.len() - 1] - next[next.len() - 2]).abs()
        } else {
            (next[0] - value).abs()
        };
        if next_resid <= resid {
            value = next[next.len() - 1];
            resid = next_resid;
            row = next;
        } else {
            break;
        }
    }

    let status = if resid <= tol {
        LimitStatus::Converged
    } else {
        LimitStatus::Inconclusive
    };
    LimitEstimate {
        value,
        residual_gamma: resid,
        status,
        samples_used: n,
    }
}

/// Ordinary least squares fit of `ln |m|` against `ln s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in log space.
    pub rms_residual: f64,
}

/// Fit `|m| ~ C * s^slope` through `(s, m)` pairs; `exp(intercept) = C`.
pub fn loglog_fit(points: &[(f64, f64)]) -> Result<LogLogFit> {
    if points.len() < 2 {
        return Err(Error::InsufficientSamples {
            got: points.len(),
            need: 2,
        });
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(s, m) in points {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Degenerate(format!(
                "log-log fit needs positive abscissae, got {s}"
            )));
        }
        if m == 0.0 || !m.is_finite() {
            return Err(Error::Degenerate(format!(
                "log-log fit needs nonzero finite magnitudes, got {m}"
            )));
        }
        xs.push(s.ln());
        ys.push(m.abs().ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate(
            "log-log fit needs at least two distinct abscissae".into(),
        ));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok(LogLogFit {
        slope,
        intercept,
        rms_residual: (ss / n).sqrt(),
    })
}

/// Slope of the log-log fit alone.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    Ok(loglog_fit(points)?.slope)
}
