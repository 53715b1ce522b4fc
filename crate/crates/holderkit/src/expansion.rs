//! Fractional and compound Taylor expansions.
//!
//! A function with a Hölder singularity of order `alpha` at `x` admits a
//! one-sided expansion on the exponent ladder `alpha + k`:
//!
//! ```text
//! f(x ± eps) = f(x) + sum_k c_k eps^(alpha + k)
//! ```
//!
//! The coefficients come from limits of epsilon-derivatives: with
//! `G_0(eps) = eps^(1-alpha) f'(x ± eps)` and `G_k` its `k`-th symbolic
//! derivative in `eps`,
//!
//! ```text
//! c_k = ± L_k / (k! (k + alpha)),    L_k = lim G_k(eps),
//! ```
//!
//! where the minus sign belongs to the backward direction (expanding in the
//! positive step size absorbs the alternation of ordinary backward Taylor
//! series into a single global sign). At `alpha = 1` the ladder degenerates
//! to the classical Taylor coefficients.
//!
//! Compound powers `f(x) = g(x^alpha)` instead live on the product ladder
//! `alpha * k`, with coefficients read directly off the smooth outer
//! function: `c_k = (±1)^k g^(k)(x^alpha) / k!`.
//!
//! Every coefficient limit is first established in `f64`; when the function
//! is symbolic, a second double-double pass re-extracts the converged limits
//! on a deeper step schedule, which keeps truncation error curves measurable
//! ten orders of magnitude below the `f64` noise floor.

use twofloat::TwoFloat;

use crate::dd;
use crate::diffops::{factorial, Direction};
use crate::error::{Error, Result};
use crate::exprlang::{self, ExprAst, RealFn, Var};
use crate::limits::{extrapolate, EpsSchedule, LimitEstimate, LimitStatus};
use crate::velocity::collect_samples;

/// Exponent ladder of a series: `alpha + k` for Hölder expansions,
/// `alpha * k` for compound powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    AlphaPlusK,
    AlphaTimesK,
}

/// Truncated one-sided expansion with per-coefficient convergence records.
#[derive(Debug, Clone)]
pub struct FracSeries {
    pub base_x: f64,
    pub f_at_base: f64,
    pub alpha: f64,
    pub ladder: LadderKind,
    pub dir: Direction,
    /// `coeffs[k]` multiplies `eps^exponent(k)`. When a double-double pass
    /// ran, these are the refined values rounded to `f64`.
    pub coeffs: Vec<f64>,
    /// Extrapolation record of the raw limit `L_k` behind each coefficient
    /// (for ladder coefficients), or an exact marker for symbolic ones.
    pub estimates: Vec<LimitEstimate>,
    hi: Option<DeepSeries>,
}

#[derive(Debug, Clone)]
struct DeepSeries {
    f_at_base: TwoFloat,
    coeffs: Vec<TwoFloat>,
}

impl FracSeries {
    /// Exponent attached to `coeffs[k]`.
    pub fn exponent(&self, k: usize) -> f64 {
        match self.ladder {
            LadderKind::AlphaPlusK => self.alpha + k as f64,
            LadderKind::AlphaTimesK => self.alpha * k as f64,
        }
    }

    /// Whether a double-double refinement backs the coefficients.
    pub fn is_deep(&self) -> bool {
        self.hi.is_some()
    }
}

// Symbolic differentiation keeps the coefficient trees exact, but their size
// grows with each order; beyond this the construction stops being desk-scale.
const MAX_ORDER: usize = 16;

fn exact_estimate(value: f64) -> LimitEstimate {
    LimitEstimate {
        value,
        residual_gamma: 0.0,
        status: LimitStatus::Converged,
        samples_used: 0,
    }
}

/// Coefficients `c_0..c_n` of the one-sided expansion of `f` at `x` on the
/// ladder `alpha + k`. Requires a symbolic function: the limits are taken
/// over epsilon-derivative trees.
///
/// Each limit is probed in `f64` on the caller's schedule, then re-taken in
/// double-double arithmetic on an internal halving schedule; the sharper
/// record wins. The second pass matters because the `k`-th coefficient tree
/// amplifies rounding noise like `eps^(-k)`, which caps pure-`f64` accuracy
/// well above useful tolerances from `k = 3` on. A coefficient whose limit
/// fails both passes aborts with [`Error::NonConvergent`].
pub fn frac_taylor_coeffs(
    f: &RealFn,
    x: f64,
    alpha: f64,
    n: usize,
    dir: Direction,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<FracSeries> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::UnsupportedExponent { beta: alpha });
    }
    if n > MAX_ORDER {
        return Err(Error::Precondition(format!(
            "expansion order {n} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    let ast = f.ast().ok_or_else(|| {
        Error::Precondition(
            "fractional coefficients require a symbolic expression; supply a parsed formula"
                .into(),
        )
    })?;
    schedule.validate()?;

    let s = dir.sign();
    let f_at_base = f.eval(x)?;
    // G_0(eps) = eps^(1-alpha) f'(x + s*eps), then differentiate in eps.
    let fprime = exprlang::differentiate(ast, Var::X);
    let step = exprlang::add(
        exprlang::num(x),
        exprlang::mul(exprlang::num(s), exprlang::var(Var::X)),
    );
    let shifted = exprlang::substitute(&fprime, Var::X, &step);
    let mut tree = exprlang::mul(
        exprlang::pow(exprlang::var(Var::X), exprlang::num(1.0 - alpha)),
        shifted,
    );

    let mut coeffs = Vec::with_capacity(n + 1);
    let mut estimates = Vec::with_capacity(n + 1);
    let mut deep_coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let samples = collect_samples(schedule, |eps| tree.eval(eps))?;
        let probe = extrapolate(&samples, tol);
        let deep = deep_limit(&tree, k, tol);
        let norm = factorial(k) * (k as f64 + alpha);

        match deep {
            Some((value, record)) if record.converged() => {
                let norm_dd = dd::dd(factorial(k)) * (dd::dd(k as f64) + alpha);
                let c = dd::ddiv(value * s, norm_dd);
                coeffs.push(c.hi());
                deep_coeffs.push(c);
                estimates.push(record);
            }
            deep => {
                if !probe.converged() {
                    // A definite divergence diagnosis beats an inconclusive
                    // probe, whichever pass produced it.
                    let estimate = match deep {
                        Some((_, record))
                            if record.status == LimitStatus::Diverged
                                && probe.status != LimitStatus::Diverged =>
                        {
                            record
                        }
                        _ => probe,
                    };
                    return Err(Error::NonConvergent {
                        context: format!(
                            "coefficient {k} (order {}) of the {dir} expansion at {x}",
                            alpha + k as f64
                        ),
                        estimate,
                    });
                }
                let c = s * probe.value / norm;
                coeffs.push(c);
                deep_coeffs.push(dd::dd(c));
                estimates.push(probe);
            }
        }
        if k < n {
            tree = exprlang::differentiate(&tree, Var::X);
        }
    }

    let hi = dd::deval(ast, dd::dd(x)).ok().map(|f_at_base| DeepSeries {
        f_at_base,
        coeffs: deep_coeffs,
    });

    Ok(FracSeries {
        base_x: x,
        f_at_base,
        alpha,
        ladder: LadderKind::AlphaPlusK,
        dir,
        coeffs,
        estimates,
        hi,
    })
}

/// Per-order deep schedule: halving steps are exact in double-double, and
/// higher orders must stop at larger steps because cancellation noise in the
/// `k`-th derivative tree grows like `eps^(-k)`.
fn deep_schedule(k: usize) -> EpsSchedule {
    EpsSchedule {
        eps0: 0.5,
        ratio: 0.5,
        count: 40usize.saturating_sub(7 * k).max(12),
    }
}

/// Double-double limit of a coefficient tree on the deep schedule.
fn deep_limit(tree: &ExprAst, k: usize, tol: f64) -> Option<(TwoFloat, LimitEstimate)> {
    dd::deep_limit_with(&deep_schedule(k), tol, |eps| dd::deval(tree, eps))
}

/// Coefficients of the compound expansion of `f(x) = g(x^alpha)` on the
/// product ladder `alpha * k`: `c_k = (±1)^k g^(k)(x^alpha) / k!` with
/// `c_0 = 0` by construction (the constant term is `f_at_base`).
pub fn compound_power_coeffs(
    g: &RealFn,
    x: f64,
    alpha: f64,
    n: usize,
    dir: Direction,
) -> Result<FracSeries> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::UnsupportedExponent { beta: alpha });
    }
    if n > MAX_ORDER {
        return Err(Error::Precondition(format!(
            "expansion order {n} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    if x < 0.0 {
        return Err(Error::Domain { x });
    }
    let u0 = x.powf(alpha);
    let s = dir.sign();
    let f_at_base = g.eval(u0)?;

    let mut coeffs = vec![0.0];
    let mut estimates = vec![exact_estimate(0.0)];
    let mut sign = 1.0;
    for k in 1..=n {
        sign *= s;
        let gk = g.derivative_n(k)?;
        let c = sign * gk.eval(u0)? / factorial(k);
        coeffs.push(c);
        estimates.push(exact_estimate(c));
    }

    let hi = g.ast().and_then(|ast| {
        let u0_dd = dd::dpow_const(dd::dd(x), alpha)?;
        let f_base = dd::deval(ast, u0_dd).ok()?;
        let mut deep = vec![dd::dd(0.0)];
        let mut tree = ast.clone();
        let mut sign = dd::dd(1.0);
        for k in 1..=n {
            sign = sign * s;
            tree = exprlang::differentiate(&tree, Var::X);
            let v = dd::deval(&tree, u0_dd).ok()?;
            deep.push(dd::ddiv(v * sign, dd::dd(factorial(k))));
        }
        Some(DeepSeries {
            f_at_base: f_base,
            coeffs: deep,
        })
    });

    let mut series = FracSeries {
        base_x: x,
        f_at_base,
        alpha,
        ladder: LadderKind::AlphaTimesK,
        dir,
        coeffs,
        estimates,
        hi,
    };
    if let Some(deep) = &series.hi {
        series.f_at_base = deep.f_at_base.hi();
        for (c, d) in series.coeffs.iter_mut().zip(&deep.coeffs) {
            *c = d.hi();
        }
        for (e, c) in series.estimates.iter_mut().zip(&series.coeffs) {
            e.value = *c;
        }
    }
    Ok(series)
}

/// Evaluate the truncated series at step `eps >= 0`.
pub fn eval_series(series: &FracSeries, eps: f64) -> Result<f64> {
    if !(eps >= 0.0) {
        return Err(Error::Precondition(format!(
            "series step must be nonnegative, got {eps}"
        )));
    }
    let mut acc = series.f_at_base;
    for (k, c) in series.coeffs.iter().enumerate() {
        acc += c * eps.powf(series.exponent(k));
    }
    Ok(acc)
}

fn eval_series_deep(series: &FracSeries, deep: &DeepSeries, eps: TwoFloat) -> Option<TwoFloat> {
    let mut acc = deep.f_at_base;
    for (k, c) in deep.coeffs.iter().enumerate() {
        acc = acc + *c * dd::dpow_const(eps, series.exponent(k))?;
    }
    Some(acc)
}

/// Truncation error curve of a series against the function it expands.
#[derive(Debug, Clone)]
pub struct ErrorCurve {
    /// `(eps, |f(x ± eps) - series(eps)|)` for each usable grid step.
    pub points: Vec<(f64, f64)>,
    /// Grid steps dropped because the function left its domain there.
    pub skipped: usize,
    /// Whether the residuals were formed in double-double arithmetic.
    pub deep: bool,
}

/// Measure `|f(x ± eps) - series(eps)|` over a step grid. When both the
/// function and the series carry symbolic/double-double backing, residuals
/// are formed in double-double arithmetic, which tracks truncation tails far
/// below `f64` resolution.
pub fn error_curve(f: &RealFn, series: &FracSeries, grid: &[f64]) -> Result<ErrorCurve> {
    if grid.is_empty() {
        return Err(Error::Precondition("error curve needs a nonempty grid".into()));
    }
    if grid.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Precondition(
            "error curve grid steps must be positive".into(),
        ));
    }
    let s = series.dir.sign();
    let deep_parts = match (&series.hi, f.ast()) {
        (Some(deep), Some(ast)) => Some((deep, ast)),
        _ => None,
    };
    let mut points = Vec::with_capacity(grid.len());
    let mut skipped = 0usize;
    for &eps in grid {
        if let Some((deep, ast)) = deep_parts {
            let x_dd = dd::dd(series.base_x) + dd::dd(s) * dd::dd(eps);
            let truth = match dd::deval(ast, x_dd) {
                Ok(v) => v,
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            };
            if let Some(approx) = eval_series_deep(series, deep, dd::dd(eps)) {
                points.push((eps, (truth - approx).abs().hi()));
                continue;
            }
        }
        match f.eval(series.base_x + s * eps) {
            Ok(truth) => points.push((eps, (truth - eval_series(series, eps)?).abs())),
            Err(Error::Domain { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    if points.is_empty() {
        return Err(Error::InsufficientSamples { got: 0, need: 1 });
    }
    Ok(ErrorCurve {
        points,
        skipped,
        deep: deep_parts.is_some(),
    })
}

/// Logarithmically spaced grid from `min` to `max` inclusive.
pub fn log_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max > min) || count < 2 {
        return Err(Error::Precondition(
            "log grid needs 0 < min < max and at least two points".into(),
        ));
    }
    let (a, b) = (min.ln(), max.ln());
    Ok((0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::{loglog_fit, DEFAULT_TOL};
    use crate::velocity::fractional_velocity;
    use approx::assert_relative_eq;

    fn f(src: &str) -> RealFn {
        RealFn::parse(src).unwrap()
    }

    /// Coarse schedule for coefficient work: the k-th derivative tree
    /// amplifies f64 cancellation noise like eps^(-k), so the smallest step
    /// stays near 2e-2.
    fn coeff_schedule() -> EpsSchedule {
        EpsSchedule {
            eps0: 0.5,
            ratio: 0.7,
            count: 10,
        }
    }

    // Closed forms for asin(1 - x) at 0: c_k = -(2k-1)!! / (k! (k+1/2) 2^(2k+1/2)).
    const ASIN_COEFFS: [f64; 5] = [
        -1.4142135623730951,
        -0.11785113019775792,
        -0.026516504294495532,
        -0.007891816754314147,
        -0.0026854098677874527,
    ];

    fn asin_series(n: usize) -> FracSeries {
        frac_taylor_coeffs(
            &f("asin(1-x)"),
            0.0,
            0.5,
            n,
            Direction::Forward,
            &coeff_schedule(),
            DEFAULT_TOL,
        )
        .unwrap()
    }

    #[test]
    fn arcsine_coefficients_match_the_closed_form() {
        let series = asin_series(4);
        assert!(series.is_deep());
        for (k, want) in ASIN_COEFFS.iter().enumerate() {
            assert_relative_eq!(series.coeffs[k], *want, max_relative = 1e-12);
            assert!(series.estimates[k].converged());
            assert_relative_eq!(series.exponent(k), 0.5 + k as f64);
        }
        assert_relative_eq!(series.f_at_base, std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn coefficients_match_brute_force_residual_quotients() {
        // Independent extraction: peel residuals and extrapolate their
        // quotients directly, without the derivative-tree machinery.
        let g = f("x^0.4 - 0.7*x^1.4 + 0.25*x^2.4");
        let alpha = 0.4;
        let series = frac_taylor_coeffs(
            &g,
            0.0,
            alpha,
            2,
            Direction::Forward,
            &coeff_schedule(),
            DEFAULT_TOL,
        )
        .unwrap();
        let brute = EpsSchedule {
            eps0: 0.25,
            ratio: 0.5,
            count: 10,
        };
        // Peeling residuals numerically needs the lower coefficients far more
        // accurately than extrapolation provides (an error delta in c_j leaks
        // delta * eps^(j-k) into the c_k quotient), so the exact lower terms
        // are subtracted and each quotient limit is checked independently.
        let exact = [1.0, -0.7, 0.25];
        for k in 0..=2 {
            let samples: Vec<f64> = brute
                .steps()
                .map(|eps| {
                    let mut r = g.eval(eps).unwrap();
                    for j in 0..k {
                        r -= exact[j] * eps.powf(alpha + j as f64);
                    }
                    r / eps.powf(alpha + k as f64)
                })
                .collect();
            let est = extrapolate(&samples, 1e-4);
            assert!(est.converged(), "brute-force c_{k} did not settle");
            assert!((est.value - exact[k]).abs() < 2e-4, "brute c_{k} = {}", est.value);
            assert_relative_eq!(series.coeffs[k], exact[k], max_relative = 1e-9);
        }
    }

    #[test]
    fn leading_coefficient_is_the_fractional_velocity() {
        let series = asin_series(0);
        let vel = fractional_velocity(
            &f("asin(1-x)"),
            0.0,
            0.5,
            Direction::Forward,
            &EpsSchedule::default(),
            DEFAULT_TOL,
        )
        .unwrap();
        assert!((series.coeffs[0] - vel.value).abs() < 1e-9);
        assert!((series.coeffs[0] + std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn series_evaluation_at_a_worked_point() {
        let series = asin_series(1);
        let v = eval_series(&series, 0.01).unwrap();
        assert_relative_eq!(v, 1.4292571194273894, max_relative = 1e-13);
        assert_relative_eq!(eval_series(&series, 0.0).unwrap(), series.f_at_base);
        assert!(eval_series(&series, -0.1).is_err());
    }

    #[test]
    fn backward_coefficients_carry_the_reflected_sign() {
        // Even profile abs(x)^1.5: f(0 - eps) = +eps^1.5, so the backward
        // ladder at alpha = 0.5 must put +1 on c_1 and 0 on c_0.
        let even = frac_taylor_coeffs(
            &f("abs(x)^1.5"),
            0.0,
            0.5,
            1,
            Direction::Backward,
            &coeff_schedule(),
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(even.coeffs[0].abs() < 1e-10);
        assert_relative_eq!(even.coeffs[1], 1.0, max_relative = 1e-9);

        // Smooth case at alpha = 1: the positive-step basis turns ordinary
        // backward Taylor alternation into alternating coefficient signs,
        // c_k = (-1)^(k+1) f^(k+1)(x) / (k+1)!.
        let smooth = frac_taylor_coeffs(
            &f("exp(x)"),
            0.3,
            1.0,
            2,
            Direction::Backward,
            &coeff_schedule(),
            DEFAULT_TOL,
        )
        .unwrap();
        let e3 = 0.3f64.exp();
        for (k, want) in [-e3, e3 / 2.0, -e3 / 6.0].iter().enumerate() {
            assert_relative_eq!(smooth.coeffs[k], *want, max_relative = 1e-8);
        }
        let v = eval_series(&smooth, 0.05).unwrap();
        assert!((v - 0.25f64.exp()).abs() < 1e-6);
    }

    #[test]
    fn order_one_ladder_reduces_to_taylor() {
        let series = frac_taylor_coeffs(
            &f("exp(x)"),
            0.3,
            1.0,
            3,
            Direction::Forward,
            &coeff_schedule(),
            DEFAULT_TOL,
        )
        .unwrap();
        let e3 = 0.3f64.exp();
        for k in 0..=3 {
            // c_k multiplies eps^(1+k): ordinary Taylor term f^(k+1)/(k+1)!.
            assert_relative_eq!(
                series.coeffs[k],
                e3 / factorial(k + 1),
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn off_ladder_grades_fail_honestly() {
        let err = frac_taylor_coeffs(
            &f("x^0.5 + x^0.8"),
            0.0,
            0.5,
            1,
            Direction::Forward,
            &coeff_schedule(),
            DEFAULT_TOL,
        )
        .unwrap_err();
        match err {
            Error::NonConvergent { context, estimate } => {
                assert!(context.contains("coefficient 1"), "{context}");
                assert_eq!(estimate.status, LimitStatus::Diverged);
            }
            other => panic!("expected NonConvergent, got {other}"),
        }
    }

    #[test]
    fn preconditions_are_enforced() {
        let g = f("x^0.5");
        let sched = coeff_schedule();
        assert!(matches!(
            frac_taylor_coeffs(&g, 0.0, 0.0, 1, Direction::Forward, &sched, DEFAULT_TOL),
            Err(Error::UnsupportedExponent { .. })
        ));
        assert!(matches!(
            frac_taylor_coeffs(&g, 0.0, 1.2, 1, Direction::Forward, &sched, DEFAULT_TOL),
            Err(Error::UnsupportedExponent { .. })
        ));
        assert!(matches!(
            frac_taylor_coeffs(&g, 0.0, 0.5, 17, Direction::Forward, &sched, DEFAULT_TOL),
            Err(Error::Precondition(_))
        ));
        let native = RealFn::native(|x: f64| x.abs().sqrt());
        assert!(matches!(
            frac_taylor_coeffs(&native, 0.0, 0.5, 1, Direction::Forward, &sched, DEFAULT_TOL),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn compound_cosine_ladder_matches_the_composition() {
        let series =
            compound_power_coeffs(&f("cos(x)"), 0.0, 1.0 / 3.0, 8, Direction::Forward).unwrap();
        let want = [0.0, 0.0, -0.5, 0.0, 1.0 / 24.0, 0.0, -1.0 / 720.0, 0.0, 1.0 / 40320.0];
        for (k, w) in want.iter().enumerate() {
            assert_relative_eq!(series.coeffs[k], *w, max_relative = 1e-14, epsilon = 1e-15);
            assert_relative_eq!(series.exponent(k), k as f64 / 3.0);
        }
        assert_eq!(series.f_at_base, 1.0);
        for eps in [1e-6, 1e-3, 0.02] {
            let direct = (eps_powf(eps, 1.0 / 3.0)).cos();
            assert!((eval_series(&series, eps).unwrap() - direct).abs() < 1e-9);
        }
    }

    fn eps_powf(eps: f64, a: f64) -> f64 {
        eps.powf(a)
    }

    #[test]
    fn compound_backward_alternates() {
        let series =
            compound_power_coeffs(&f("exp(x)"), 0.0, 0.5, 5, Direction::Backward).unwrap();
        for k in 1..=5 {
            assert_relative_eq!(
                series.coeffs[k],
                (-1.0f64).powi(k as i32) / factorial(k),
                max_relative = 1e-14
            );
        }
        // The series represents g(u0 - eps^alpha) = exp(-sqrt(eps)).
        let v = eval_series(&series, 0.0004).unwrap();
        assert!((v - (-0.02f64).exp()).abs() < 2e-9);
    }

    #[test]
    fn error_curve_tracks_the_true_remainder_far_below_f64() {
        let series = asin_series(4);
        let curve = error_curve(&f("asin(1-x)"), &series, &[1e-4, 1e-3, 1e-2, 1e-1]).unwrap();
        assert!(curve.deep);
        assert_eq!(curve.skipped, 0);
        // References computed to 60 significant digits from the closed-form
        // coefficients; the smallest residual sits near 1e-25.
        let refs = [
            9.887574337827181e-26,
            3.127817332559473e-20,
            9.925690363259788e-15,
            3.2529502376400672e-9,
        ];
        for ((eps, got), want) in curve.points.iter().zip(refs) {
            let rel = (got - want).abs() / want;
            let allow = if *eps <= 1e-4 { 0.25 } else { 5e-3 };
            assert!(rel < allow, "eps={eps}: got {got:e}, want {want:e}");
        }
    }

    #[test]
    fn error_curve_slope_is_the_first_omitted_exponent() {
        let series = asin_series(4);
        let grid = log_grid(1e-4, 1e-1, 32).unwrap();
        let curve = error_curve(&f("asin(1-x)"), &series, &grid).unwrap();
        let fit = loglog_fit(&curve.points).unwrap();
        assert!(
            (fit.slope - 5.5).abs() < 0.05,
            "slope {} should be near 5.5",
            fit.slope
        );

        let shallow = asin_series(1);
        let grid = log_grid(1e-3, 1e-1, 24).unwrap();
        let curve = error_curve(&f("asin(1-x)"), &shallow, &grid).unwrap();
        let fit = loglog_fit(&curve.points).unwrap();
        assert!((fit.slope - 2.5).abs() < 0.05, "slope {}", fit.slope);
    }

    #[test]
    fn error_curve_skips_points_outside_the_domain() {
        let series = asin_series(0);
        let curve = error_curve(&f("asin(1-x)"), &series, &[0.5, 1.0, 3.0]).unwrap();
        assert_eq!(curve.skipped, 1);
        assert_eq!(curve.points.len(), 2);
    }

    #[test]
    fn log_grid_spans_inclusively() {
        let g = log_grid(1e-4, 1e-1, 4).unwrap();
        assert_eq!(g.len(), 4);
        assert_relative_eq!(g[0], 1e-4, max_relative = 1e-12);
        assert_relative_eq!(g[3], 1e-1, max_relative = 1e-12);
        assert_relative_eq!(g[1] / g[0], 10.0, max_relative = 1e-10);
        assert!(log_grid(0.0, 1.0, 4).is_err());
        assert!(log_grid(1e-3, 1e-1, 1).is_err());
    }
}
