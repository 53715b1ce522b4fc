//! Regularized derivatives at points of fractional grade.
//!
//! A function carrying a Hölder grade `beta` at `x` has no ordinary
//! derivative there: the difference quotient is dominated by the singular
//! term `K eps^beta` with `K` the fractional velocity. Subtracting the
//! kernel `g(x, eps) = f(x) + K eps^beta` removes exactly that term, and
//! the limit of `(delta f - K eps^beta) / eps` — the regularized derivative
//! — recovers the derivative of the remaining differentiable part. For a
//! `C^1` function the kernel constant is zero and the construction reduces
//! to the classical derivative.
//!
//! The same subtraction generalizes in two directions. The composition of
//! variations divides the kernel residual by an arbitrary grade
//! `eps^(alpha+beta)` instead of `eps`; the order of composition matters,
//! and swapping grades generally produces a divergent quotient. Multi-grade
//! functions carry an increasing ladder of exponents, each with its own
//! velocity, that must be peeled in ascending order before the integer
//! Taylor terms; the quotient against `eps^(n+beta)` scaled by `(n+1)!`
//! then plays the role of a higher-order derivative.
//!
//! Two consequences of the kernel picture are checked numerically here: the
//! fractional l'Hôpital rule (a `0/0` ratio converges to the ratio of the
//! velocities) and the orthogonality of grades (for a purely Hölderian
//! function the regularized derivative annihilates the velocity, so their
//! product vanishes — unless the function hides a `C^1` part, which is the
//! standard counterexample `x + sqrt(x)`).
//!
//! Ladder peeling amplifies upstream coefficient error by `eps^(-gap)`
//! between grades, so the peeled stages run in double-double arithmetic
//! whenever the function carries an expression tree, with sampling depth
//! chosen so amplified noise stays below the requested tolerance. Kernel
//! subtraction at the base grade has no such amplification and runs in
//! plain `f64`.

use twofloat::TwoFloat;

use crate::dd;
use crate::diffops::{self, Direction};
use crate::error::{Error, Result};
use crate::exprlang::RealFn;
use crate::limits::{extrapolate, EpsSchedule, LimitEstimate, LimitStatus};
use crate::velocity::{collect_samples, fractional_velocity};

/// Ordinary derivative recovered at a point of fractional grade by
/// subtracting the singular kernel before the difference quotient.
#[derive(Debug, Clone)]
pub struct RegularizedDerivative {
    /// The regularized limit, scaled where the mixed-order definition
    /// requires it.
    pub value: f64,
    pub dir: Direction,
    /// The grade whose kernel was subtracted; `sup alpha_i` for ladders.
    pub beta_used: f64,
    /// The subtracted velocity `K` at `beta_used`.
    pub kernel_constant: f64,
    pub estimate: LimitEstimate,
}

/// Strictly increasing grades in `(0, 1)` carried by a multi-Hölder
/// function, with the grade velocities once they have been resolved.
#[derive(Debug, Clone)]
pub struct ExponentLadder {
    exponents: Vec<f64>,
    forward: Option<Vec<f64>>,
    backward: Option<Vec<f64>>,
}

impl ExponentLadder {
    pub fn new(exponents: impl Into<Vec<f64>>) -> Result<Self> {
        let exponents = exponents.into();
        if exponents.is_empty() {
            return Err(Error::Precondition(
                "an exponent ladder needs at least one grade".into(),
            ));
        }
        for pair in exponents.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::Precondition(format!(
                    "ladder grades must be strictly increasing, got {} before {}",
                    pair[0], pair[1]
                )));
            }
        }
        for &a in &exponents {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::UnsupportedExponent { beta: a });
            }
        }
        Ok(ExponentLadder {
            exponents,
            forward: None,
            backward: None,
        })
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    /// The supremum grade, used as `beta` in the mixed-order quotient.
    pub fn top_grade(&self) -> f64 {
        *self.exponents.last().expect("ladder is never empty")
    }

    /// Grade velocities resolved for `dir`, if `resolve` has run.
    pub fn velocities(&self, dir: Direction) -> Option<&[f64]> {
        match dir {
            Direction::Forward => self.forward.as_deref(),
            Direction::Backward => self.backward.as_deref(),
        }
    }

    /// Resolve the grade velocities in ascending order: each grade is the
    /// limit of the difference quotient after the kernels of all lower
    /// grades have been subtracted. Fails if any stage does not converge.
    pub fn resolve(
        &mut self,
        f: &RealFn,
        x: f64,
        dir: Direction,
        schedule: &EpsSchedule,
        tol: f64,
    ) -> Result<&[f64]> {
        let peeler = Peeler::new(f, x);
        let grades = peel_grades(&peeler, f, x, &self.exponents, dir, schedule, tol)?;
        let values: Vec<f64> = grades.iter().map(|g| g.value.hi()).collect();
        let slot = match dir {
            Direction::Forward => &mut self.forward,
            Direction::Backward => &mut self.backward,
        };
        *slot = Some(values);
        Ok(slot.as_deref().expect("velocities just stored"))
    }
}

/// Composition of variations: the limit of
/// `(delta f - K eps^beta) / eps^(alpha+beta)` with `K` the velocity of
/// order `beta`. Swapped grades generally diverge; that outcome is reported
/// in the estimate's status rather than as an error.
pub fn composition_variation(
    f: &RealFn,
    x: f64,
    alpha: f64,
    beta: f64,
    dir: Direction,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<LimitEstimate> {
    for grade in [alpha, beta] {
        if !(grade > 0.0 && grade <= 1.0) {
            return Err(Error::UnsupportedExponent { beta: grade });
        }
    }
    // A divergent kernel velocity (an unsubtracted lower grade under
    // `eps^beta`) makes the whole composition divergent; report that as a
    // status. Anything inconclusive still aborts: no certified kernel.
    let kernel = match fractional_velocity(f, x, beta, dir, schedule, tol) {
        Ok(v) => v.value,
        Err(Error::NonConvergent { estimate, .. }) if estimate.status == LimitStatus::Diverged => {
            return Ok(estimate)
        }
        Err(e) => return Err(e),
    };
    let samples = collect_samples(schedule, |eps| {
        Ok((diffops::delta(f, x, eps, dir)? - kernel * eps.powf(beta)) / eps.powf(alpha + beta))
    })?;
    Ok(extrapolate(&samples, tol))
}

/// The regularized quotient `(delta f - kernel eps^beta) / eps` with a
/// caller-supplied kernel constant.
pub(crate) fn regularized_with_kernel(
    f: &RealFn,
    x: f64,
    beta: f64,
    kernel: f64,
    dir: Direction,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<LimitEstimate> {
    let samples = collect_samples(schedule, |eps| {
        Ok((diffops::delta(f, x, eps, dir)? - kernel * eps.powf(beta)) / eps)
    })?;
    Ok(extrapolate(&samples, tol))
}

/// Regularized derivative of grade `beta`: the velocity is computed first
/// and used as the kernel constant; if it does not converge the operation
/// aborts rather than subtracting a garbage kernel.
pub fn regularized_derivative(
    f: &RealFn,
    x: f64,
    beta: f64,
    dir: Direction,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<RegularizedDerivative> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::UnsupportedExponent { beta });
    }
    let kernel = fractional_velocity(f, x, beta, dir, schedule, tol)?.value;
    let estimate = regularized_with_kernel(f, x, beta, kernel, dir, schedule, tol)?;
    Ok(RegularizedDerivative {
        value: estimate.value,
        dir,
        beta_used: beta,
        kernel_constant: kernel,
        estimate,
    })
}

/// Mixed-order regularized derivative over an exponent ladder: subtract the
/// fractional terms in ascending grade order, then the integer Taylor
/// terms, quotient against `eps^(n+beta)` with `beta` the top grade, and
/// scale by `(n+1)!` (negated for odd `n` on the backward side).
///
/// Integer coefficients come from the symbolic derivatives when those
/// evaluate finitely at `x`, and are otherwise peeled numerically like the
/// grades; `f` must still expose `n` symbolic derivatives. The ladder
/// velocities are re-derived internally at full precision — use
/// [`ExponentLadder::resolve`] to inspect them.
pub fn multi_regularized_derivative(
    f: &RealFn,
    x: f64,
    ladder: &ExponentLadder,
    n: usize,
    dir: Direction,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<RegularizedDerivative> {
    schedule.validate()?;
    let beta = ladder.top_grade();
    let peeler = Peeler::new(f, x);
    let grades = peel_grades(&peeler, f, x, &ladder.exponents, dir, schedule, tol)?;

    // Numerator terms as subtracted: `delta f - sum coeff * eps^exponent`.
    let mut terms: Vec<(TwoFloat, f64)> = grades
        .iter()
        .zip(&ladder.exponents)
        .map(|(g, &a)| (g.value, a))
        .collect();
    let mut noise = grade_noise(&grades);

    for k in 1..=n {
        let derivative = f.derivative_n(k)?;
        let coeff = match symbolic_coefficient(&derivative, x) {
            Some(d_k) => d_k,
            None => {
                let gap = k as f64 - ladder.exponents[0];
                let stage = peeler.stage(
                    f,
                    x,
                    dir,
                    &terms,
                    k as f64,
                    adaptive_count(noise, gap, tol),
                    schedule,
                    tol,
                )?;
                if !stage.estimate.converged() {
                    return Err(Error::NonConvergent {
                        context: format!(
                            "integer order {k} of the {dir} regularization at {x}"
                        ),
                        estimate: stage.estimate,
                    });
                }
                noise = noise.max(stage.estimate.residual_gamma);
                // The peeled quotient sees `-d_k (-eps)^k / k!` backward.
                let sign = match dir {
                    Direction::Forward => 1.0,
                    Direction::Backward => -(-1.0f64).powi(k as i32),
                };
                stage.value * dd::dd(sign * diffops::factorial(k))
            }
        };
        let term = match dir {
            Direction::Forward => dd::ddiv(coeff, dd::dd(diffops::factorial(k))),
            Direction::Backward => dd::ddiv(
                coeff * dd::dd(-(-1.0f64).powi(k as i32)),
                dd::dd(diffops::factorial(k)),
            ),
        };
        terms.push((term, k as f64));
    }

    let gap = n as f64 + beta - ladder.exponents[0];
    let stage = peeler.stage(
        f,
        x,
        dir,
        &terms,
        n as f64 + beta,
        adaptive_count(noise, gap, tol),
        schedule,
        tol,
    )?;
    let scale = match dir {
        Direction::Forward => diffops::factorial(n + 1),
        Direction::Backward => (-1.0f64).powi(n as i32) * diffops::factorial(n + 1),
    };
    let mut estimate = stage.estimate;
    estimate.value *= scale;
    estimate.residual_gamma *= scale.abs();
    Ok(RegularizedDerivative {
        value: estimate.value,
        dir,
        beta_used: beta,
        kernel_constant: grades.last().expect("ladder is never empty").value.hi(),
        estimate,
    })
}

/// Fractional l'Hôpital ratio for the indeterminate form `0/0`, by both
/// routes the rule equates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopitalRatio {
    /// Ratio of the order-`beta` velocities of numerator and denominator.
    pub velocity_ratio: f64,
    /// Extrapolated limit of the plain quotient `f(x ± eps) / g(x ± eps)`.
    pub direct_ratio: f64,
}

/// Fractional l'Hôpital rule: for `f(x) = g(x) = 0` the ratio of the
/// order-`beta` velocities equals the direct quotient limit. Both sides are
/// computed and must agree within `10 tol` (scaled by magnitude).
pub fn frac_lhopital(
    f: &RealFn,
    g: &RealFn,
    x: f64,
    beta: f64,
    dir: Direction,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<HopitalRatio> {
    for (name, func) in [("numerator", f), ("denominator", g)] {
        let at_x = func.eval(x)?;
        if at_x.abs() > tol {
            return Err(Error::Precondition(format!(
                "l'Hôpital needs the 0/0 form, but the {name} is {at_x} at {x}"
            )));
        }
    }
    let num_velocity = fractional_velocity(f, x, beta, dir, schedule, tol)?.value;
    let den_velocity = fractional_velocity(g, x, beta, dir, schedule, tol)?.value;
    if den_velocity.abs() <= tol {
        return Err(Error::ZeroDenominator);
    }
    let velocity_ratio = num_velocity / den_velocity;

    let sign = dir.sign();
    let samples = collect_samples(schedule, |eps| {
        let num = f.eval(x + sign * eps)?;
        let den = g.eval(x + sign * eps)?;
        if den == 0.0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(num / den)
    })?;
    let direct = extrapolate(&samples, tol);
    if !direct.converged() {
        return Err(Error::NonConvergent {
            context: format!("direct {dir} quotient limit of the 0/0 form at {x}"),
            estimate: direct,
        });
    }
    let scale = 1.0 + velocity_ratio.abs().max(direct.value.abs());
    if (velocity_ratio - direct.value).abs() > 10.0 * tol * scale {
        return Err(Error::RouteDisagreement {
            context: format!("l'Hôpital ratio of order {beta} at {x}"),
            lhs: velocity_ratio,
            rhs: direct.value,
            tol: 10.0 * tol * scale,
        });
    }
    Ok(HopitalRatio {
        velocity_ratio,
        direct_ratio: direct.value,
    })
}

/// Velocity, regularized derivative, and their product at the same grade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradeOrthogonality {
    pub velocity: f64,
    pub reg_deriv: f64,
    pub product: f64,
}

/// Orthogonality of grades: for a purely Hölderian function of grade
/// `alpha` the regularized derivative and the velocity cannot both be
/// nonzero, so their product vanishes. The purity hypothesis is the
/// caller's to assert — a hidden `C^1` part (as in `x + sqrt(x)`) makes
/// both factors nonzero, and that counterexample is part of the test
/// corpus, not an error.
pub fn orthogonality_check(
    f: &RealFn,
    x: f64,
    alpha: f64,
    dir: Direction,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<GradeOrthogonality> {
    let velocity = fractional_velocity(f, x, alpha, dir, schedule, tol)?.value;
    let derivative = regularized_derivative(f, x, alpha, dir, schedule, tol)?;
    Ok(GradeOrthogonality {
        velocity,
        reg_deriv: derivative.value,
        product: velocity * derivative.value,
    })
}

/// One resolved peeling stage.
struct Stage {
    value: TwoFloat,
    estimate: LimitEstimate,
}

/// Where the peeled quotients are evaluated: in double-double when the
/// function has an expression tree evaluable at the base point, in plain
/// `f64` otherwise.
enum Peeler {
    Deep { f_at_x: TwoFloat },
    Shallow,
}

impl Peeler {
    fn new(f: &RealFn, x: f64) -> Peeler {
        match f.ast().and_then(|ast| dd::deval(ast, dd::dd(x)).ok()) {
            Some(f_at_x) => Peeler::Deep { f_at_x },
            None => Peeler::Shallow,
        }
    }

    /// Extrapolate `(delta f - sum coeff eps^a) / eps^divide_exp`. The deep
    /// variant samples a halving schedule of the given depth; the shallow
    /// variant uses the caller's schedule. Falls back to shallow when the
    /// tree cannot be sampled.
    #[allow(clippy::too_many_arguments)]
    fn stage(
        &self,
        f: &RealFn,
        x: f64,
        dir: Direction,
        terms: &[(TwoFloat, f64)],
        divide_exp: f64,
        depth: usize,
        schedule: &EpsSchedule,
        tol: f64,
    ) -> Result<Stage> {
        if let Peeler::Deep { f_at_x } = self {
            let ast = f.ast().expect("deep peeler implies a tree");
            let halving = EpsSchedule {
                eps0: 0.5,
                ratio: 0.5,
                count: depth,
            };
            let deep = dd::deep_limit_with(&halving, tol, |eps| {
                let away = dd::deval(ast, dd::dd(x) + dd::dd(dir.sign()) * eps)?;
                let mut num = match dir {
                    Direction::Forward => away - *f_at_x,
                    Direction::Backward => *f_at_x - away,
                };
                for &(coeff, a) in terms {
                    num = num - coeff * dpow(eps, a);
                }
                Ok(dd::ddiv(num, dpow(eps, divide_exp)))
            });
            if let Some((value, estimate)) = deep {
                return Ok(Stage { value, estimate });
            }
        }
        let samples = collect_samples(schedule, |eps| {
            let mut num = diffops::delta(f, x, eps, dir)?;
            for &(coeff, a) in terms {
                num -= coeff.hi() * eps.powf(a);
            }
            Ok(num / eps.powf(divide_exp))
        })?;
        let estimate = extrapolate(&samples, tol);
        Ok(Stage {
            value: dd::dd(estimate.value),
            estimate,
        })
    }
}

fn dpow(eps: TwoFloat, a: f64) -> TwoFloat {
    dd::dpow_const(eps, a).expect("schedule steps are positive")
}

/// Peel the ladder grades in ascending order; every stage must converge.
fn peel_grades(
    peeler: &Peeler,
    f: &RealFn,
    x: f64,
    exponents: &[f64],
    dir: Direction,
    schedule: &EpsSchedule,
    tol: f64,
) -> Result<Vec<Stage>> {
    schedule.validate()?;
    let mut grades: Vec<Stage> = Vec::with_capacity(exponents.len());
    for (i, &alpha_i) in exponents.iter().enumerate() {
        let terms: Vec<(TwoFloat, f64)> = grades
            .iter()
            .zip(exponents)
            .map(|(g, &a)| (g.value, a))
            .collect();
        let gap = alpha_i - exponents[0];
        let depth = adaptive_count(grade_noise(&grades), gap, tol);
        let stage = peeler.stage(f, x, dir, &terms, alpha_i, depth, schedule, tol)?;
        if !stage.estimate.converged() {
            return Err(Error::NonConvergent {
                context: format!("{dir} velocity of grade {alpha_i} at {x} (ladder stage {i})"),
                estimate: stage.estimate,
            });
        }
        grades.push(stage);
    }
    Ok(grades)
}

/// Worst residual among resolved stages, floored at the double-double
/// arithmetic noise.
fn grade_noise(grades: &[Stage]) -> f64 {
    grades
        .iter()
        .map(|g| g.estimate.residual_gamma)
        .fold(1e-28, f64::max)
}

/// Depth of the halving schedule for a peeled stage: coefficient error
/// `noise` at a lower exponent amplifies by `eps^(-gap)` in the quotient,
/// so the smallest step is chosen to keep the amplified noise two orders
/// below the tolerance. Without amplification the full depth is safe.
fn adaptive_count(noise: f64, gap: f64, tol: f64) -> usize {
    if gap <= 0.0 {
        return 40;
    }
    let budget = (0.01 * tol / noise).ln() / gap;
    ((budget / core::f64::consts::LN_2) as isize).clamp(10, 40) as usize
}

/// Evaluate a symbolic derivative at `x`, preferring the double-double tree
/// route. `None` means the symbolic value is unusable (non-finite or outside
/// the domain) and the coefficient must be peeled numerically.
fn symbolic_coefficient(derivative: &RealFn, x: f64) -> Option<TwoFloat> {
    if let Some(ast) = derivative.ast() {
        if let Ok(v) = dd::deval(ast, dd::dd(x)) {
            if v.hi().is_finite() {
                return Some(v);
            }
        }
        return None;
    }
    match derivative.eval(x) {
        Ok(v) if v.is_finite() => Some(dd::dd(v)),
        _ => None,
    }
}
