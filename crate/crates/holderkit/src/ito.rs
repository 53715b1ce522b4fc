//! Fractional co-variation and the compound differential rule for
//! two-place functions `f(x, w)` driven by a Hölder signal of exponent 1/2.
//!
//! A signal with `w(x ± ε) = w(x) ± K ε^{1/2} + o(ε^{1/2})` has a square
//! increment `(Δ±ε w)² = K² ε + o(ε)`, so when `f(x, w(x))` is expanded to
//! second order in `Δw` the quadratic term survives at first order in `ε`
//! instead of vanishing. The co-variation
//!
//! `[w, w]± = lim_{ε→0} (Δ±ε w)² / ε`
//!
//! measures exactly that surviving mass. It is a limit of squares, hence
//! nonnegative, and equals the square of the order-1/2 velocity whenever
//! that velocity exists — exactly so for pure powers. Regularizing the
//! composite `h(t) = f(t, w(t))` then yields the compound rule
//!
//! `đ± h = ∂f/∂x + (∂f/∂w)·đ± w ± ½ (∂²f/∂w²)·[w, w]±`,
//!
//! with opposite signs on the covariation term in the two directions: the
//! backward increment enters the expansion with a negative first power, so
//! its square carries a minus sign. Forward and backward results are
//! reported separately and never averaged. [`ito_derivative`] assembles the
//! right-hand side from symbolic partials and the limit ingredients, then
//! recomputes the left-hand side directly — the regularized derivative of
//! the composite with kernel constant `(∂f/∂w)·(±D^{1/2} w)` — and insists
//! the two routes agree.
//!
//! The same expansion truncated at a fixed step `ε` gives a one-step
//! predictor for the composite increment,
//!
//! `Δ± h ≈ ε·∂f/∂x + ε^{1/2}·(∂f/∂w)·(±D^{1/2} w) ± ½ ε·(∂²f/∂w²)·(Δ±ε w)²/ε`,
//!
//! realized by [`ito_step`]; its residual shrinks at least linearly in `ε`,
//! and like `ε^{3/2}` at points where the half-power increment dominates.
//! When `w` is merely `C¹` every fractional ingredient vanishes and the rule
//! degenerates to the classical chain rule `∂f/∂x + (∂f/∂w)·w′`.

use crate::diffops::{delta, Direction};
use crate::error::{Error, Result};
use crate::exprlang::{differentiate, parse_xw, substitute, ExprAst, RealFn, Var};
use crate::limits::{extrapolate, EpsSchedule, LimitEstimate};
use crate::regularize::{regularized_derivative, regularized_with_kernel};
use crate::velocity::{collect_samples, fractional_velocity, require_converged};

/// A twice-differentiable function of the pair `(x, w)`, expression-backed,
/// carrying its symbolic partial derivatives up to second order.
#[derive(Debug, Clone)]
pub struct Compound2Fn {
    ast: ExprAst,
    fx: ExprAst,
    fw: ExprAst,
    fww: ExprAst,
    fxw: ExprAst,
    fxx: ExprAst,
}

impl Compound2Fn {
    /// Parse a two-variable expression in `x` and `w`.
    pub fn parse(src: &str) -> Result<Compound2Fn> {
        Ok(Compound2Fn::from_ast(parse_xw(src)?))
    }

    /// Build from an existing tree (which may use both variables).
    pub fn from_ast(ast: ExprAst) -> Compound2Fn {
        let fx = differentiate(&ast, Var::X);
        let fw = differentiate(&ast, Var::W);
        let fww = differentiate(&fw, Var::W);
        let fxw = differentiate(&fx, Var::W);
        let fxx = differentiate(&fx, Var::X);
        Compound2Fn {
            ast,
            fx,
            fw,
            fww,
            fxw,
            fxx,
        }
    }

    /// The underlying expression tree.
    pub fn ast(&self) -> &ExprAst {
        &self.ast
    }

    pub fn eval(&self, x: f64, w: f64) -> Result<f64> {
        self.ast.eval_xw(x, w)
    }

    /// `∂f/∂x` at `(x, w)`.
    pub fn partial_x(&self, x: f64, w: f64) -> Result<f64> {
        self.fx.eval_xw(x, w)
    }

    /// `∂f/∂w` at `(x, w)`.
    pub fn partial_w(&self, x: f64, w: f64) -> Result<f64> {
        self.fw.eval_xw(x, w)
    }

    /// `∂²f/∂w²` at `(x, w)`.
    pub fn partial_ww(&self, x: f64, w: f64) -> Result<f64> {
        self.fww.eval_xw(x, w)
    }

    /// `∂²f/∂x∂w` at `(x, w)`.
    pub fn partial_xw(&self, x: f64, w: f64) -> Result<f64> {
        self.fxw.eval_xw(x, w)
    }

    /// `∂²f/∂x²` at `(x, w)`.
    pub fn partial_xx(&self, x: f64, w: f64) -> Result<f64> {
        self.fxx.eval_xw(x, w)
    }
}

/// The extrapolated limit of `(Δ±ε w)² / ε`.
#[derive(Debug, Clone)]
pub struct Covariation {
    /// The limit value; nonnegative, being a limit of squares.
    pub value: f64,
    pub dir: Direction,
    pub estimate: LimitEstimate,
}

/// Co-variation of `w` with itself at `x`: `lim (Δ±ε w)² / ε`.
///
/// For `w` of Hölder exponent 1/2 this is the square of the half-order
/// velocity; for anything smoother the increments are `O(ε)` and the limit
/// is zero.
pub fn covariation(
    w: &RealFn,
    x: f64,
    dir: Direction,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<Covariation> {
    let samples = collect_samples(schedule, |eps| {
        let dw = delta(w, x, eps, dir)?;
        Ok(dw * dw / eps)
    })?;
    let estimate = require_converged(
        || format!("{dir} covariation at {x}"),
        extrapolate(&samples, tol),
    )?;
    Ok(Covariation {
        // The samples are all nonnegative; extrapolation may undershoot an
        // exact zero by rounding noise, never by more.
        value: estimate.value.max(0.0),
        dir,
        estimate,
    })
}

/// Velocity of a smooth function of a Hölder signal: the chain rule
/// `±D^β [f∘w](x) = f′(w(x)) · ±D^β w(x)`.
///
/// The product is cross-checked against the directly sampled velocity of
/// the composite; disagreement beyond `10·tol` is reported as an error
/// rather than silently preferring either route.
pub fn chain_velocity(
    f_outer: &RealFn,
    w: &RealFn,
    x: f64,
    beta: f64,
    dir: Direction,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<f64> {
    let u0 = w.eval(x)?;
    let slope = f_outer.derivative()?.eval(u0)?;
    let inner = fractional_velocity(w, x, beta, dir, schedule, tol)?.value;
    let chained = slope * inner;

    let composite = compose(f_outer, w);
    let direct = fractional_velocity(&composite, x, beta, dir, schedule, tol)?.value;
    let gate = 10.0 * tol * (1.0 + chained.abs().max(direct.abs()));
    if (chained - direct).abs() > gate {
        return Err(Error::RouteDisagreement {
            context: format!("{dir} chain-rule velocity of order {beta} at {x}"),
            lhs: chained,
            rhs: direct,
            tol: gate,
        });
    }
    Ok(chained)
}

/// Both routes to the compound derivative of `h(t) = f(t, w(t))`, with the
/// assembled right-hand side broken into its three terms.
#[derive(Debug, Clone)]
pub struct ItoDerivative {
    /// The assembled expansion `∂f/∂x + (∂f/∂w)·đ±w ± ½(∂²f/∂w²)[w,w]±`.
    pub value: f64,
    /// The same quantity computed directly: the regularized derivative of
    /// the composite with kernel constant `(∂f/∂w)·(±D^{1/2}w)`.
    pub direct: f64,
    /// `∂f/∂x` at `(x, w(x))`.
    pub partial_x: f64,
    /// `(∂f/∂w)·đ±w` at `(x, w(x))`.
    pub w_term: f64,
    /// `±½·(∂²f/∂w²)·[w,w]±` at `(x, w(x))`.
    pub covariation_term: f64,
    pub dir: Direction,
    /// Extrapolation record of the direct composite route.
    pub estimate: LimitEstimate,
}

/// Compound derivative of `f(x, w(x))` for `w` of Hölder exponent 1/2.
///
/// Assembles `∂f/∂x + (∂f/∂w)·đ±w ± ½(∂²f/∂w²)·[w,w]±` from the symbolic
/// partials at `(x, w(x))`, the regularized half-order derivative of `w`,
/// and the co-variation; then recomputes the left-hand side directly by
/// regularizing the scalar composite and requires the two routes to agree
/// within `10·tol` (relative). A non-convergent limit in any ingredient is
/// reported with the ingredient named.
pub fn ito_derivative(
    f: &Compound2Fn,
    w: &RealFn,
    x: f64,
    dir: Direction,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<ItoDerivative> {
    let u0 = w.eval(x)?;
    let fx_v = f.partial_x(x, u0)?;
    let fw_v = f.partial_w(x, u0)?;
    let fww_v = f.partial_ww(x, u0)?;

    let reg_w = regularized_derivative(w, x, 0.5, dir, schedule, tol)
        .map_err(|e| tag("compound rule, regularized dw term", e))?;
    let cov = covariation(w, x, dir, schedule, tol)
        .map_err(|e| tag("compound rule, covariation term", e))?;

    let partial_x = fx_v;
    let w_term = fw_v * reg_w.value;
    let covariation_term = dir.sign() * 0.5 * fww_v * cov.value;
    let value = partial_x + w_term + covariation_term;

    let composite = compose_xw(f, w);
    let kernel = fw_v * reg_w.kernel_constant;
    let direct_est = require_converged(
        || format!("{dir} compound derivative at {x}, direct composite route"),
        regularized_with_kernel(&composite, x, 0.5, kernel, dir, schedule, tol)?,
    )?;
    let direct = direct_est.value;

    let gate = 10.0 * tol * (1.0 + value.abs().max(direct.abs()));
    if (value - direct).abs() > gate {
        return Err(Error::RouteDisagreement {
            context: format!("{dir} compound derivative at {x}"),
            lhs: direct,
            rhs: value,
            tol: gate,
        });
    }
    Ok(ItoDerivative {
        value,
        direct,
        partial_x,
        w_term,
        covariation_term,
        dir,
        estimate: direct_est,
    })
}

/// One step of the discrete compound expansion at a fixed `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ItoStep {
    /// `ε·∂f/∂x + ε^{1/2}·(∂f/∂w)·(±D^{1/2}w) ± ½ ε·(∂²f/∂w²)·(Δ±εw)²/ε`.
    pub predicted: f64,
    /// The actual increment `Δ±ε h` of the composite.
    pub actual: f64,
    /// `actual − predicted`.
    pub residual: f64,
}

/// Discrete-step form of the compound rule with a caller-supplied
/// half-order velocity of `w` (useful when sweeping a grid of step sizes
/// without recomputing the limit).
pub fn ito_step_with(
    f: &Compound2Fn,
    w: &RealFn,
    x: f64,
    eps: f64,
    dir: Direction,
    velocity_half: f64,
) -> Result<ItoStep> {
    if eps < 0.0 || eps.is_nan() {
        return Err(Error::Precondition(format!(
            "step size must be nonnegative, got {eps}"
        )));
    }
    if eps == 0.0 {
        return Ok(ItoStep {
            predicted: 0.0,
            actual: 0.0,
            residual: 0.0,
        });
    }
    let u0 = w.eval(x)?;
    let fx_v = f.partial_x(x, u0)?;
    let fw_v = f.partial_w(x, u0)?;
    let fww_v = f.partial_ww(x, u0)?;

    let dw = delta(w, x, eps, dir)?;
    let cov_sample = dw * dw / eps;
    let predicted = eps * fx_v
        + eps.sqrt() * fw_v * velocity_half
        + dir.sign() * 0.5 * eps * fww_v * cov_sample;

    let h0 = f.eval(x, u0)?;
    let actual = match dir {
        Direction::Forward => f.eval(x + eps, w.eval(x + eps)?)? - h0,
        Direction::Backward => h0 - f.eval(x - eps, w.eval(x - eps)?)?,
    };
    Ok(ItoStep {
        predicted,
        actual,
        residual: actual - predicted,
    })
}

/// Discrete-step form of the compound rule; the half-order velocity of `w`
/// is extrapolated internally over `schedule`.
pub fn ito_step(
    f: &Compound2Fn,
    w: &RealFn,
    x: f64,
    eps: f64,
    dir: Direction,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<ItoStep> {
    if eps == 0.0 {
        return Ok(ItoStep {
            predicted: 0.0,
            actual: 0.0,
            residual: 0.0,
        });
    }
    let kw = fractional_velocity(w, x, 0.5, dir, schedule, tol)
        .map_err(|e| tag("discrete compound step, half-order velocity", e))?
        .value;
    ito_step_with(f, w, x, eps, dir, kw)
}

/// The scalar composite `f_outer(w(t))`, symbolic when both factors are
/// expression-backed.
fn compose(f_outer: &RealFn, w: &RealFn) -> RealFn {
    match (f_outer.ast(), w.ast()) {
        (Some(fa), Some(wa)) => RealFn::from_ast(substitute(fa, Var::X, wa)),
        _ => {
            let (fo, wi) = (f_outer.clone(), w.clone());
            RealFn::native(move |t| match wi.eval(t) {
                Ok(u) => fo.eval(u).unwrap_or(f64::NAN),
                Err(_) => f64::NAN,
            })
        }
    }
}

/// The scalar composite `h(t) = f(t, w(t))`, symbolic when `w` is
/// expression-backed.
fn compose_xw(f: &Compound2Fn, w: &RealFn) -> RealFn {
    match w.ast() {
        Some(wa) => RealFn::from_ast(substitute(f.ast(), Var::W, wa)),
        None => {
            let (fc, wi) = (f.clone(), w.clone());
            RealFn::native(move |t| match wi.eval(t) {
                Ok(u) => fc.eval(t, u).unwrap_or(f64::NAN),
                Err(_) => f64::NAN,
            })
        }
    }
}

/// Name the compound-rule ingredient whose limit failed.
fn tag(ingredient: &str, e: Error) -> Error {
    match e {
        Error::NonConvergent { context, estimate } => Error::NonConvergent {
            context: format!("{ingredient}: {context}"),
            estimate,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::DEFAULT_TOL;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn f2(src: &str) -> Compound2Fn {
        Compound2Fn::parse(src).unwrap()
    }

    fn rf(src: &str) -> RealFn {
        RealFn::parse(src).unwrap()
    }

    fn sched() -> EpsSchedule {
        EpsSchedule::default()
    }

    #[test]
    fn covariation_of_the_root_signal() {
        let root = rf("sqrt(x)");
        let fwd = covariation(&root, 0.0, Direction::Forward, &sched(), DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(fwd.value, 1.0, epsilon = 1e-12);

        let smooth_point =
            covariation(&root, 0.25, Direction::Forward, &sched(), DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(smooth_point.value, 0.0, epsilon = 1e-9);

        // Backward at the cusp of the even reflection: the increment is
        // -sqrt(eps), and its square sees the same unit mass.
        let folded = rf("sqrt(abs(x))");
        let bwd = covariation(&folded, 0.0, Direction::Backward, &sched(), DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(bwd.value, 1.0, epsilon = 1e-12);

        for dir in [Direction::Forward, Direction::Backward] {
            let c1 = covariation(&rf("sin(x)"), 0.7, dir, &sched(), DEFAULT_TOL).unwrap();
            assert_abs_diff_eq!(c1.value, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn covariation_squares_the_half_velocity() {
        for c in [0.5, 1.0, 2.5] {
            let w = RealFn::parse(&format!("{c} * sqrt(x)")).unwrap();
            let vel =
                fractional_velocity(&w, 0.0, 0.5, Direction::Forward, &sched(), DEFAULT_TOL)
                    .unwrap()
                    .value;
            let cov = covariation(&w, 0.0, Direction::Forward, &sched(), DEFAULT_TOL)
                .unwrap()
                .value;
            assert_abs_diff_eq!(cov, vel * vel, epsilon = 1e-12 * (1.0 + vel * vel));
            assert_abs_diff_eq!(cov, c * c, epsilon = 1e-10 * (1.0 + c * c));
        }
        // Smoother than exponent 1/2: both sides vanish.
        let w = rf("x^0.7");
        let vel = fractional_velocity(&w, 0.0, 0.5, Direction::Forward, &sched(), DEFAULT_TOL)
            .unwrap()
            .value;
        let cov = covariation(&w, 0.0, Direction::Forward, &sched(), DEFAULT_TOL)
            .unwrap()
            .value;
        assert_abs_diff_eq!(vel, 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(cov, 0.0, epsilon = 1e-6);
    }

    #[test]
    fn chain_rule_velocities_agree_with_the_composite() {
        let sq = chain_velocity(
            &rf("x^2"),
            &rf("sqrt(x)"),
            0.0,
            0.5,
            Direction::Forward,
            &sched(),
            DEFAULT_TOL,
        )
        .unwrap();
        assert_abs_diff_eq!(sq, 0.0, epsilon = 1e-9);

        let sin = chain_velocity(
            &rf("sin(x)"),
            &rf("sqrt(x)"),
            0.0,
            0.5,
            Direction::Forward,
            &sched(),
            DEFAULT_TOL,
        )
        .unwrap();
        assert_abs_diff_eq!(sin, 1.0, epsilon = 1e-6);

        let affine = chain_velocity(
            &rf("3*x + 1"),
            &rf("0.7 * x^0.5"),
            0.0,
            0.5,
            Direction::Forward,
            &sched(),
            DEFAULT_TOL,
        )
        .unwrap();
        assert_abs_diff_eq!(affine, 2.1, epsilon = 1e-9);
    }

    #[test]
    fn chain_rule_requires_a_symbolic_slope() {
        let opaque = RealFn::native(|u| u * u);
        let err = chain_velocity(
            &opaque,
            &rf("sqrt(x)"),
            0.0,
            0.5,
            Direction::Forward,
            &sched(),
            DEFAULT_TOL,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MissingDerivative { order: 1 }));
    }

    #[test]
    fn ito_derivative_on_the_quadratic_example() {
        let f = f2("w^2 / 2");
        let root = rf("sqrt(x)");

        // At the singular point the whole derivative is covariation mass.
        let at0 = ito_derivative(&f, &root, 0.0, Direction::Forward, &sched(), DEFAULT_TOL)
            .unwrap();
        assert_abs_diff_eq!(at0.value, 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(at0.direct, 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(at0.covariation_term, 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(at0.w_term, 0.0, epsilon = 1e-9);

        // At a smooth point the same value arrives through the dw term.
        for dir in [Direction::Forward, Direction::Backward] {
            let at_quarter =
                ito_derivative(&f, &root, 0.25, dir, &sched(), DEFAULT_TOL).unwrap();
            assert_abs_diff_eq!(at_quarter.value, 0.5, epsilon = 1e-6);
            assert_abs_diff_eq!(at_quarter.direct, 0.5, epsilon = 1e-6);
            assert_abs_diff_eq!(at_quarter.w_term, 0.5, epsilon = 1e-6);
            assert_abs_diff_eq!(at_quarter.covariation_term, 0.0, epsilon = 1e-7);
        }

        // Backward across the cusp of the even reflection the covariation
        // term flips sign: the left derivative of |t|/2 is -1/2.
        let folded = rf("sqrt(abs(x))");
        let bwd = ito_derivative(&f, &folded, 0.0, Direction::Backward, &sched(), DEFAULT_TOL)
            .unwrap();
        assert_abs_diff_eq!(bwd.value, -0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(bwd.direct, -0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(bwd.covariation_term, -0.5, epsilon = 1e-6);

        // No w-dependence at all: only the time slot contributes.
        let time_only = ito_derivative(
            &f2("x"),
            &root,
            0.25,
            Direction::Forward,
            &sched(),
            DEFAULT_TOL,
        )
        .unwrap();
        assert_abs_diff_eq!(time_only.value, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(time_only.direct, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn ito_consistency_across_the_corpus() {
        let half = 0.5f64;
        let corpus: [(&str, &str, &[(f64, Option<f64>)]); 4] = [
            (
                "w^2 / 2",
                "sqrt(x)",
                &[(0.0, Some(half)), (0.04, Some(half)), (0.25, Some(half))],
            ),
            (
                "sin(w)",
                "sqrt(x)",
                &[
                    (0.0, Some(0.0)),
                    (0.04, None),
                    (0.25, Some(0.5f64.cos())),
                ],
            ),
            (
                "x * w",
                "sqrt(x)",
                &[(0.0, Some(0.0)), (0.04, Some(0.3)), (0.25, Some(0.75))],
            ),
            (
                "w^3",
                "x^0.5 + x",
                &[(0.0, Some(0.0)), (0.04, Some(0.6048)), (0.25, None)],
            ),
        ];
        for (fsrc, wsrc, points) in corpus {
            let f = f2(fsrc);
            let w = RealFn::parse(wsrc).unwrap();
            for &(x, expected) in points {
                for dir in [Direction::Forward, Direction::Backward] {
                    // The root signals live on (0, inf); the origin is a
                    // one-sided point.
                    if x == 0.0 && dir == Direction::Backward {
                        continue;
                    }
                    let d = ito_derivative(&f, &w, x, dir, &sched(), DEFAULT_TOL).unwrap();
                    let scale = 1.0 + d.value.abs().max(d.direct.abs());
                    assert!(
                        (d.value - d.direct).abs() <= 1e-6 * scale,
                        "{fsrc} over {wsrc} at {x} {dir}: routes {} vs {}",
                        d.value,
                        d.direct
                    );
                    if let Some(v) = expected {
                        assert_abs_diff_eq!(d.value, v, epsilon = 1e-6);
                    }
                }
            }
        }
    }

    #[test]
    fn smooth_signals_recover_the_classical_chain_rule() {
        let f = f2("x*w + w^2");
        let w = rf("x^2 + 1");
        // w(0.3) = 1.09, w' = 0.6; f_x + f_w w' = 1.09 + (0.3 + 2.18)*0.6.
        for dir in [Direction::Forward, Direction::Backward] {
            let d = ito_derivative(&f, &w, 0.3, dir, &sched(), DEFAULT_TOL).unwrap();
            assert_abs_diff_eq!(d.value, 2.578, epsilon = 1e-7);
            assert_abs_diff_eq!(d.covariation_term, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn ito_derivative_reports_the_failing_ingredient() {
        // Exponent 0.3 is rougher than 1/2: the half-order velocity of w
        // diverges and the dw ingredient must say so.
        let err = ito_derivative(
            &f2("w^2 / 2"),
            &rf("x^0.3"),
            0.0,
            Direction::Forward,
            &sched(),
            DEFAULT_TOL,
        )
        .unwrap_err();
        match err {
            Error::NonConvergent { context, .. } => {
                assert!(context.contains("regularized dw term"), "context: {context}")
            }
            other => panic!("expected NonConvergent, got {other}"),
        }
    }

    #[test]
    fn ito_step_is_exact_on_the_quadratic() {
        let f = f2("w^2 / 2");
        let root = rf("sqrt(x)");
        // On eps = 4^-k every intermediate value is a power of two, and the
        // predicted and actual increments are the same float, eps/2.
        for k in 1..=8 {
            let eps = 0.25f64.powi(k);
            let step =
                ito_step_with(&f, &root, 0.0, eps, Direction::Forward, 1.0).unwrap();
            assert_eq!(step.residual, 0.0);
            assert_eq!(step.actual, eps / 2.0);
        }
        // On arbitrary steps the identity holds to rounding.
        for &eps in &[1e-1, 3.7e-3, 2.2e-5] {
            let step =
                ito_step_with(&f, &root, 0.0, eps, Direction::Forward, 1.0).unwrap();
            assert!(step.residual.abs() <= 1e-15 * eps);
        }
        let zero = ito_step(&f, &root, 0.0, 0.0, Direction::Forward, &sched(), DEFAULT_TOL)
            .unwrap();
        assert_eq!((zero.predicted, zero.actual, zero.residual), (0.0, 0.0, 0.0));
    }

    #[test]
    fn backward_steps_follow_the_expansion_signs() {
        let folded = rf("sqrt(abs(x))");
        // Identity in w: the increment is -sqrt(eps) on both sides of the
        // predictor, pinning the plus sign on the velocity term.
        let ident = f2("w");
        for &eps in &[0.25, 1e-2, 1e-4] {
            let step =
                ito_step_with(&ident, &folded, 0.0, eps, Direction::Backward, -1.0).unwrap();
            assert_eq!(step.residual, 0.0);
            assert_eq!(step.actual, -eps.sqrt());
        }
        // Quadratic in w: only the covariation term survives, with the
        // backward minus sign.
        let quad = f2("w^2 / 2");
        for k in 1..=6 {
            let eps = 0.25f64.powi(k);
            let step =
                ito_step_with(&quad, &folded, 0.0, eps, Direction::Backward, -1.0).unwrap();
            assert_eq!(step.residual, 0.0);
            assert_eq!(step.actual, -eps / 2.0);
        }
    }

    #[test]
    fn step_residuals_scale_like_the_next_order() {
        let grid = crate::expansion::log_grid(1e-6, 1e-2, 16).unwrap();

        // At the singular point of exp(w(x)) the first neglected term is
        // (dw)^3/6 = eps^{3/2}/6.
        let f = f2("exp(w)");
        let root = rf("sqrt(x)");
        let kw = fractional_velocity(&root, 0.0, 0.5, Direction::Forward, &sched(), DEFAULT_TOL)
            .unwrap()
            .value;
        let points: Vec<(f64, f64)> = grid
            .iter()
            .map(|&eps| {
                let s = ito_step_with(&f, &root, 0.0, eps, Direction::Forward, kw).unwrap();
                (eps, s.residual.abs())
            })
            .collect();
        let slope = crate::limits::loglog_slope(&points).unwrap();
        assert_abs_diff_eq!(slope, 1.5, epsilon = 0.2);

        // At smooth points the neglected classical drift dominates: order 1.
        for (fsrc, x) in [("x * w", 0.25), ("w^2 / 2", 0.04)] {
            let f = f2(fsrc);
            let kw =
                fractional_velocity(&root, x, 0.5, Direction::Forward, &sched(), DEFAULT_TOL)
                    .unwrap()
                    .value;
            let points: Vec<(f64, f64)> = grid
                .iter()
                .map(|&eps| {
                    let s = ito_step_with(&f, &root, x, eps, Direction::Forward, kw).unwrap();
                    (eps, s.residual.abs())
                })
                .collect();
            let slope = crate::limits::loglog_slope(&points).unwrap();
            assert!(slope >= 0.98, "{fsrc} at {x}: slope {slope}");
        }
    }

    #[test]
    fn two_variable_parsing_exposes_the_partials() {
        let f = f2("x*w + sin(w)*exp(x)");
        let (x, w) = (0.3, 0.8);
        assert_relative_eq!(
            f.eval(x, w).unwrap(),
            x * w + w.sin() * x.exp(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            f.partial_x(x, w).unwrap(),
            w + w.sin() * x.exp(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            f.partial_w(x, w).unwrap(),
            x + w.cos() * x.exp(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            f.partial_ww(x, w).unwrap(),
            -w.sin() * x.exp(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            f.partial_xw(x, w).unwrap(),
            1.0 + w.cos() * x.exp(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            f.partial_xx(x, w).unwrap(),
            w.sin() * x.exp(),
            max_relative = 1e-14
        );

        assert!(Compound2Fn::parse("x + q").is_err());
        // The single-variable grammar keeps rejecting `w`.
        assert!(RealFn::parse("w^2").is_err());
    }

    proptest! {
        #[test]
        fn partials_match_finite_differences(
            pick in 0usize..5,
            x in 0.2f64..1.2,
            w in 0.2f64..1.2,
        ) {
            let srcs = [
                "x*w + w^2",
                "sin(w) * exp(x/2)",
                "w^3 - x*w",
                "exp(w) * cos(x)",
                "x^2 * w^2 / 2",
            ];
            let f = f2(srcs[pick]);
            let ev = |a: f64, b: f64| f.eval(a, b).unwrap();

            let h = 1e-6;
            let fd_x = (ev(x + h, w) - ev(x - h, w)) / (2.0 * h);
            let fd_w = (ev(x, w + h) - ev(x, w - h)) / (2.0 * h);
            let h2 = 5e-4;
            let fd_ww = (ev(x, w + h2) - 2.0 * ev(x, w) + ev(x, w - h2)) / (h2 * h2);
            let fd_xx = (ev(x + h2, w) - 2.0 * ev(x, w) + ev(x - h2, w)) / (h2 * h2);
            let fd_xw = (ev(x + h2, w + h2) - ev(x + h2, w - h2) - ev(x - h2, w + h2)
                + ev(x - h2, w - h2))
                / (4.0 * h2 * h2);

            let pairs = [
                (f.partial_x(x, w).unwrap(), fd_x),
                (f.partial_w(x, w).unwrap(), fd_w),
                (f.partial_ww(x, w).unwrap(), fd_ww),
                (f.partial_xx(x, w).unwrap(), fd_xx),
                (f.partial_xw(x, w).unwrap(), fd_xw),
            ];
            for (sym, fd) in pairs {
                prop_assert!(
                    (sym - fd).abs() <= 1e-6 * (1.0 + sym.abs()),
                    "symbolic {sym} vs finite difference {fd}"
                );
            }
        }
    }
}
