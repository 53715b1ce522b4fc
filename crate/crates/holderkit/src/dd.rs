//! Double-double evaluation for quantities below the `f64` noise floor.
//!
//! Truncation errors of a fractional expansion decay like `eps^(alpha+n+1)`;
//! for a fifth-order tail at `eps = 1e-4` that is around `1e-25`, ten orders
//! of magnitude below what `f64` residual arithmetic can resolve. This module
//! re-evaluates expression trees and difference quotients in double-double
//! precision (~31 significant digits) so such tails remain measurable.
//!
//! The `twofloat` crate supplies the representation and the well-conditioned
//! primitives (add, sub, mul, sqrt). Its division is not used — a quotient
//! here is one ordinary `f64` division refined by a Newton correction in
//! double-double residual arithmetic — and `asin`/`ln` are recomputed from
//! series and Newton steps because the built-ins only carry `f64`-grade
//! accuracy past the first few guard digits.

use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::exprlang::{ExprAst, Func, Var};
use crate::limits::{extrapolate, EpsSchedule, LimitEstimate, LimitStatus};

/// Construct from a pre-split (hi, lo) pair; panics on overlapping parts,
/// which cannot happen for pairs produced by nearest-f64 decomposition.
/// Only reference values in tests need more than `f64` input precision.
#[cfg(test)]
pub(crate) fn dd2(hi: f64, lo: f64) -> TwoFloat {
    TwoFloat::try_from((hi, lo)).expect("non-overlapping double-double pair")
}

pub(crate) fn dd(value: f64) -> TwoFloat {
    TwoFloat::from(value)
}

/// Quotient via one Newton refinement of the `f64` quotient: accurate to a
/// few units in the last double-double place.
pub(crate) fn ddiv(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q = dd(a.hi() / b.hi());
    let r = a - q * b;
    q + r.hi() / b.hi()
}

/// Integer power by binary exponentiation.
pub(crate) fn dpowi(x: TwoFloat, n: i32) -> TwoFloat {
    if n < 0 {
        return ddiv(dd(1.0), dpowi(x, n.checked_neg().expect("exponent overflow")));
    }
    let mut result = dd(1.0);
    let mut base = x;
    let mut k = n as u32;
    while k > 0 {
        if k & 1 == 1 {
            result = result * base;
        }
        base = base * base;
        k >>= 1;
    }
    result
}

/// `x^(twice/2)` for nonnegative `x`: an integer power times at most one
/// square root, so half-integer exponent ladders never pass through the
/// low-accuracy general power path.
pub(crate) fn dpow_halfint(x: TwoFloat, twice: i64) -> TwoFloat {
    if twice < 0 {
        return ddiv(dd(1.0), dpow_halfint(x, -twice));
    }
    let whole = dpowi(x, (twice / 2) as i32);
    if twice % 2 == 0 {
        whole
    } else {
        whole * x.sqrt()
    }
}

/// Exponential by range reduction and Taylor summation. The built-in `exp`
/// drifts systematically once the argument leaves a small neighbourhood of
/// zero, which poisons extrapolation through general powers `eps^c =
/// e^{c ln eps}` at small `eps`; reducing to `|r| <= ln(2)/2` and summing the
/// series in double-double keeps the relative error near the representation
/// floor.
pub(crate) fn dexp(x: TwoFloat) -> TwoFloat {
    if !x.hi().is_finite() || x.hi().abs() > 709.0 {
        return dd(x.hi().exp());
    }
    let k = (x.hi() / std::f64::consts::LN_2).round();
    let r = x - twofloat::consts::LN_2 * k;
    let mut term = dd(1.0);
    let mut sum = dd(1.0);
    let mut m = 1.0f64;
    while m <= 60.0 {
        term = ddiv(term * r, dd(m));
        sum = sum + term;
        if term.hi().abs() < 1e-35 * sum.hi().abs() {
            break;
        }
        m += 1.0;
    }
    // Powers of two are exact in f64 for |k| < 1023, so the rescale is exact.
    sum * dd(2.0f64.powi(k as i32))
}

/// Natural log via one Newton step against [`dexp`], after scaling the
/// argument into [0.75, 1.5) by an exact power of two.
pub(crate) fn dln(a: TwoFloat) -> TwoFloat {
    debug_assert!(a.hi() > 0.0);
    let e = a.hi().log2().round();
    let m = a * dd(2.0f64.powi(-e as i32));
    let y0 = m.hi().ln();
    let y = y0 + (m * dexp(dd(-y0)) - 1.0);
    y + twofloat::consts::LN_2 * e
}

fn dasin_series(u: TwoFloat) -> TwoFloat {
    // Maclaurin series of asin, |u| <= 0.5; successive terms carry the ratio
    // u^2 (2m+1)^2 / ((2m+2)(2m+3)) <= 0.25, so convergence is geometric.
    let u2 = u * u;
    let mut term = u;
    let mut sum = u;
    let mut m: u64 = 0;
    while m < 200 {
        let num = ((2 * m + 1) * (2 * m + 1)) as f64;
        let den = ((2 * m + 2) * (2 * m + 3)) as f64;
        term = ddiv(term * u2 * num, dd(den));
        sum = sum + term;
        if term.hi().abs() < 1e-35 * sum.hi().abs() {
            break;
        }
        m += 1;
    }
    sum
}

/// Arcsine over [-1, 1]. Arguments near the endpoints are reduced through
/// `asin(u) = pi/2 - 2 asin(sqrt((1-u)/2))`, which keeps the series argument
/// at or below one half.
pub(crate) fn dasin(u: TwoFloat) -> Result<TwoFloat> {
    if !(u >= -1.0 && u <= 1.0) {
        return Err(Error::Domain { x: u.hi() });
    }
    let a = u.abs();
    let r = if a <= 0.5 {
        dasin_series(a)
    } else {
        let v = ((dd(1.0) - a) * 0.5).sqrt();
        twofloat::consts::FRAC_PI_2 - dasin_series(v) * 2.0
    };
    Ok(if u.hi() < 0.0 { -r } else { r })
}

pub(crate) fn dacos(u: TwoFloat) -> Result<TwoFloat> {
    Ok(twofloat::consts::FRAC_PI_2 - dasin(u)?)
}

fn call(func: Func, a: TwoFloat, at: f64) -> Result<TwoFloat> {
    match func {
        Func::Sqrt => {
            if a.hi() < 0.0 {
                Err(Error::Domain { x: at })
            } else {
                Ok(a.sqrt())
            }
        }
        Func::Asin => dasin(a).map_err(|_| Error::Domain { x: at }),
        Func::Acos => dacos(a).map_err(|_| Error::Domain { x: at }),
        Func::Atan => Ok(a.atan()),
        Func::Sin => Ok(a.sin()),
        Func::Cos => Ok(a.cos()),
        Func::Exp => Ok(dexp(a)),
        Func::Ln => {
            if a.hi() <= 0.0 {
                Err(Error::Domain { x: at })
            } else {
                Ok(dln(a))
            }
        }
        Func::Abs => Ok(a.abs()),
    }
}

/// Power with a constant exponent. Integer and half-integer exponents take
/// the exact ladder; other exponents go through `exp`/`ln` and only carry
/// that pair's accuracy. `None` marks a domain violation (negative base with
/// a fractional exponent, zero base with a negative one).
pub(crate) fn dpow_const(base: TwoFloat, e: f64) -> Option<TwoFloat> {
    let twice = e * 2.0;
    if twice.fract() == 0.0 && twice.abs() <= 2e9 {
        let t = twice as i64;
        if t % 2 == 0 {
            let n = (t / 2) as i32;
            if base.hi() == 0.0 && n < 0 {
                return None;
            }
            return Some(dpowi(base, n));
        }
        if base.hi() > 0.0 || (base.hi() == 0.0 && t > 0) {
            return Some(dpow_halfint(base, t));
        }
        return None;
    }
    if base.hi() > 0.0 {
        Some(dexp(dln(base) * e))
    } else if base.hi() == 0.0 {
        // powf edge cases: 0^0 = 1, 0^positive = 0, 0^negative undefined.
        if e == 0.0 {
            Some(dd(1.0))
        } else if e > 0.0 {
            Some(dd(0.0))
        } else {
            None
        }
    } else {
        None
    }
}

fn pow(base: TwoFloat, e: &ExprAst, x: TwoFloat) -> Result<TwoFloat> {
    let at = x.hi();
    if let Some(ev) = e.const_value() {
        return dpow_const(base, ev).ok_or(Error::Domain { x: at });
    }
    let ev = eval_node(e, x)?;
    if base.hi() > 0.0 {
        Ok(dexp(ev * dln(base)))
    } else if base.hi() == 0.0 {
        if ev.hi() == 0.0 {
            Ok(dd(1.0))
        } else if ev.hi() > 0.0 {
            Ok(dd(0.0))
        } else {
            Err(Error::Domain { x: at })
        }
    } else {
        Err(Error::Domain { x: at })
    }
}

fn eval_node(ast: &ExprAst, x: TwoFloat) -> Result<TwoFloat> {
    match ast {
        ExprAst::Num(v) => Ok(dd(*v)),
        ExprAst::Var(Var::X) => Ok(x),
        ExprAst::Var(Var::W) => Err(Error::Precondition(
            "double-double evaluation is defined for single-variable expressions".into(),
        )),
        ExprAst::Add(a, b) => Ok(eval_node(a, x)? + eval_node(b, x)?),
        ExprAst::Sub(a, b) => Ok(eval_node(a, x)? - eval_node(b, x)?),
        ExprAst::Mul(a, b) => Ok(eval_node(a, x)? * eval_node(b, x)?),
        ExprAst::Div(a, b) => {
            let d = eval_node(b, x)?;
            if d.hi() == 0.0 {
                return Err(Error::Domain { x: x.hi() });
            }
            Ok(ddiv(eval_node(a, x)?, d))
        }
        ExprAst::Pow(b, e) => pow(eval_node(b, x)?, e, x),
        ExprAst::Neg(a) => Ok(-eval_node(a, x)?),
        ExprAst::Call(f, a) => call(*f, eval_node(a, x)?, x.hi()),
    }
}

/// Evaluate an expression tree at a double-double point.
pub(crate) fn deval(ast: &ExprAst, x: TwoFloat) -> Result<TwoFloat> {
    let v = eval_node(ast, x)?;
    if v.hi().is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain { x: x.hi() })
    }
}

/// Iterated Aitken acceleration in double-double arithmetic, returning the
/// accelerated value together with the terminal difference of its stage (an
/// absolute residual scale, reported as `f64`). Divergence screening is the
/// caller's business: this routine only sharpens.
/// Sample a double-double quantity over a schedule with the same skip rules
/// as the `f64` collector: steps failing before the first success are domain
/// edges and are skipped, later failures end the run. Returns `None` when
/// fewer than four samples survive.
pub(crate) fn collect_dd_samples(
    schedule: &EpsSchedule,
    mut sample: impl FnMut(TwoFloat) -> Result<TwoFloat>,
) -> Option<Vec<TwoFloat>> {
    let mut samples = Vec::with_capacity(schedule.count);
    for eps in schedule.steps() {
        match sample(dd(eps)) {
            Ok(v) => samples.push(v),
            Err(_) if samples.is_empty() => continue,
            Err(_) => break,
        }
    }
    if samples.len() < 4 {
        return None;
    }
    Some(samples)
}

/// Double-double limit of a sampled quantity. The raw samples are screened
/// for divergence in `f64` (the screens only look at difference ratios);
/// acceleration itself runs in double-double. `None` means the quantity could
/// not be sampled, not that the limit failed.
pub(crate) fn deep_limit_with(
    schedule: &EpsSchedule,
    tol: f64,
    sample: impl FnMut(TwoFloat) -> Result<TwoFloat>,
) -> Option<(TwoFloat, LimitEstimate)> {
    let samples = collect_dd_samples(schedule, sample)?;
    let shallow: Vec<f64> = samples.iter().map(TwoFloat::hi).collect();
    let screen = extrapolate(&shallow, tol);
    if screen.status == LimitStatus::Diverged {
        return Some((dd(screen.value), screen));
    }
    let (value, residual) = dd_extrapolate(&samples);
    let status = if residual <= tol {
        LimitStatus::Converged
    } else {
        LimitStatus::Inconclusive
    };
    Some((
        value,
        LimitEstimate {
            value: value.hi(),
            residual_gamma: residual,
            status,
            samples_used: samples.len(),
        },
    ))
}

pub(crate) fn dd_extrapolate(samples: &[TwoFloat]) -> (TwoFloat, f64) {
    debug_assert!(samples.len() >= 3);
    let mut row: Vec<TwoFloat> = samples.to_vec();
    let mut best = *row.last().unwrap();
    let mut best_resid = tail_diff(&row);
    while row.len() >= 3 {
        let mut next = Vec::with_capacity(row.len() - 2);
        for k in 0..row.len() - 2 {
            let d1 = row[k + 1] - row[k];
            let d2 = row[k + 2] - row[k + 1];
            let denom = d2 - d1;
            if denom.hi() == 0.0 {
                next.push(row[k + 2]);
            } else {
                next.push(row[k + 2] - ddiv(d2 * d2, denom));
            }
        }
        let resid = tail_diff(&next);
        if resid < best_resid {
            best_resid = resid;
            best = *next.last().unwrap();
        }
        row = next;
    }
    (best, best_resid)
}

fn tail_diff(row: &[TwoFloat]) -> f64 {
    match row.len() {
        0 | 1 => f64::INFINITY,
        n => (row[n - 1] - row[n - 2]).hi().abs(),
    }
}
