//! Finite-difference building blocks for Hölder-order analysis.
//!
//! For `f` merely Hölder continuous of order `beta` at `x`, the meaningful
//! first-order object is not `delta f / eps` but the fractional variation
//! `delta f / eps^beta`. When `f` has `n` ordinary derivatives and only the
//! next order is fractional, the mixed-order variation subtracts the degree-n
//! Taylor polynomial first and rescales by `eps^(n+beta)`, normalized by
//! `(n+1)!` so that a pure power `x^(n+beta)` at the origin has variation
//! `(n+1)!` for every step size.

use crate::error::{Error, Result};
use crate::exprlang::RealFn;

/// Side of the one-sided difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    /// `+1` forward, `-1` backward: the sign of the increment.
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            out,
            "{}",
            match self {
                Direction::Forward => "forward",
                Direction::Backward => "backward",
            }
        )
    }
}

/// One variation quotient at one step size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationSample {
    pub eps: f64,
    pub value: f64,
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Precondition(format!(
            "step size must be positive and finite, got {eps}"
        )));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::UnsupportedExponent { beta });
    }
    Ok(())
}

/// One-sided difference `f(x + eps) - f(x)` (forward) or `f(x) - f(x - eps)`
/// (backward), `eps > 0`.
pub fn delta(f: &RealFn, x: f64, eps: f64, dir: Direction) -> Result<f64> {
    check_eps(eps)?;
    Ok(match dir {
        Direction::Forward => f.eval(x + eps)? - f.eval(x)?,
        Direction::Backward => f.eval(x)? - f.eval(x - eps)?,
    })
}

/// Second-order central difference `f(x + eps) - 2 f(x) + f(x - eps)`.
pub fn delta2(f: &RealFn, x: f64, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok(f.eval(x + eps)? - 2.0 * f.eval(x)? + f.eval(x - eps)?)
}

/// Fractional variation `delta f / eps^beta`, `beta` in `(0, 1]`.
pub fn frac_variation(
    f: &RealFn,
    x: f64,
    eps: f64,
    beta: f64,
    dir: Direction,
) -> Result<VariationSample> {
    check_beta(beta)?;
    let value = delta(f, x, eps, dir)? / eps.powf(beta);
    Ok(VariationSample { eps, value })
}

/// Taylor polynomial `T_n(x, eps) = f(x) + sum_{k=1..n} f^(k)(x) eps^k / k!`.
/// `eps` may be negative, which yields the expansion on the backward side.
pub fn taylor_poly(f: &RealFn, x: f64, n: usize, eps: f64) -> Result<f64> {
    let mut sum = f.eval(x)?;
    let mut g = f.clone();
    let mut kfact = 1.0;
    for k in 1..=n {
        g = g.derivative()?;
        kfact *= k as f64;
        sum += g.eval(x)? * eps.powi(k as i32) / kfact;
    }
    Ok(sum)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Mixed-order variation of order `n + beta`:
///
/// forward:  `(n+1)! (f(x+eps) - T_n(x, eps)) / eps^(n+beta)`
/// backward: `(-1)^n (n+1)! (T_n(x, -eps) - f(x-eps)) / eps^(n+beta)`
///
/// For `n = 0` both sides reduce to the plain fractional variation.
pub fn mixed_variation(
    f: &RealFn,
    x: f64,
    eps: f64,
    n: usize,
    beta: f64,
    dir: Direction,
) -> Result<VariationSample> {
    check_beta(beta)?;
    check_eps(eps)?;
    let scale = factorial(n + 1) / eps.powf(n as f64 + beta);
    let value = match dir {
        Direction::Forward => scale * (f.eval(x + eps)? - taylor_poly(f, x, n, eps)?),
        Direction::Backward => {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * scale * (taylor_poly(f, x, n, -eps)? - f.eval(x - eps)?)
        }
    };
    Ok(VariationSample { eps, value })
}

/// Which product of shifted orders to use when relating a mixed-order
/// velocity to a lower-order limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalizationVariant {
    /// `prod_{j=1..n} (j + beta)` — pairs with the variation of the n-th
    /// derivative (one fractional differencing still to be done).
    Partial,
    /// `prod_{j=0..n} (j + beta)` — pairs with the scaled (n+1)-st derivative
    /// (all differencing already absorbed).
    Full,
}

/// The product of shifted orders described by `variant`. Empty products are 1.
pub fn normalization(n: usize, beta: f64, variant: NormalizationVariant) -> f64 {
    let start = match variant {
        NormalizationVariant::Partial => 1,
        NormalizationVariant::Full => 0,
    };
    (start..=n).map(|j| j as f64 + beta).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn f(src: &str) -> RealFn {
        RealFn::parse(src).unwrap()
    }

    #[test]
    fn delta_is_linear() {
        let combo = f("2*sin(x) + 3*x^2");
        let s = f("sin(x)");
        let q = f("x^2");
        for &(x, eps) in &[(0.3, 0.01), (-1.0, 0.25)] {
            for dir in [Direction::Forward, Direction::Backward] {
                let lhs = delta(&combo, x, eps, dir).unwrap();
                let rhs =
                    2.0 * delta(&s, x, eps, dir).unwrap() + 3.0 * delta(&q, x, eps, dir).unwrap();
                assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn backward_delta_mirrors_forward_for_even_functions() {
        let c = f("cos(x)");
        let fwd = delta(&c, 0.0, 0.1, Direction::Forward).unwrap();
        let bwd = delta(&c, 0.0, 0.1, Direction::Backward).unwrap();
        assert_relative_eq!(fwd, -bwd, max_relative = 1e-14);
    }

    #[test]
    fn delta2_of_quadratic_is_exact() {
        let q = f("x^2");
        assert_relative_eq!(delta2(&q, 1.0, 0.25).unwrap(), 2.0 * 0.25 * 0.25);
    }

    #[test]
    fn pure_power_variation_is_constant_in_eps() {
        let r = f("x^0.5");
        for eps in crate::limits::EpsSchedule::default().steps() {
            let v = frac_variation(&r, 0.0, eps, 0.5, Direction::Forward).unwrap();
            assert_relative_eq!(v.value, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn smooth_function_has_vanishing_fractional_variation_below_order_one() {
        // x^2 at 0: delta ~ eps^2, so delta/eps^0.5 ~ eps^1.5 -> small.
        let q = f("x^2");
        let v = frac_variation(&q, 0.0, 1e-4, 0.5, Direction::Forward).unwrap();
        assert!(v.value.abs() < 1e-5);
    }

    #[test]
    fn taylor_poly_matches_exponential_partial_sums() {
        let e = f("exp(x)");
        let t3 = taylor_poly(&e, 0.0, 3, 0.1).unwrap();
        assert_relative_eq!(t3, 1.0 + 0.1 + 0.005 + 0.001 / 6.0, max_relative = 1e-14);
        // Negative step gives the backward-side polynomial.
        let t2 = taylor_poly(&e, 0.0, 2, -0.1).unwrap();
        assert_relative_eq!(t2, 1.0 - 0.1 + 0.005, max_relative = 1e-14);
    }

    #[test]
    fn mixed_variation_of_pure_power_is_factorial() {
        // f = x^(n + 1/2) at 0: T_n vanishes and the quotient is (n+1)!.
        for (n, src) in [(1usize, "x^1.5"), (2, "x^2.5"), (3, "x^3.5")] {
            for eps in [0.1, 0.01, 0.001] {
                let v = mixed_variation(&f(src), 0.0, eps, n, 0.5, Direction::Forward).unwrap();
                assert_relative_eq!(v.value, factorial(n + 1), max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn mixed_variation_of_smooth_function_approaches_next_derivative() {
        // With beta = 1 both one-sided variations of order n + 1 converge to
        // f^(n+1)(x); this pins the backward sign convention.
        let e = f("exp(x)");
        let expect = 0.3f64.exp();
        let fwd = mixed_variation(&e, 0.3, 1e-3, 2, 1.0, Direction::Forward).unwrap();
        let bwd = mixed_variation(&e, 0.3, 1e-3, 2, 1.0, Direction::Backward).unwrap();
        assert_relative_eq!(fwd.value, expect, max_relative = 1e-3);
        assert_relative_eq!(bwd.value, expect, max_relative = 1e-3);
    }

    #[test]
    fn backward_variation_of_even_root_flips_sign() {
        // |x|^0.5 is even: at 0 the backward quotient is the mirror image of
        // the forward one, so the order-1/2 variation is -1 instead of +1.
        let even = f("abs(x)^0.5");
        let fwd = frac_variation(&even, 0.0, 0.01, 0.5, Direction::Forward).unwrap();
        let bwd = frac_variation(&even, 0.0, 0.01, 0.5, Direction::Backward).unwrap();
        assert_relative_eq!(fwd.value, 1.0, max_relative = 1e-12);
        assert_relative_eq!(bwd.value, -1.0, max_relative = 1e-12);
    }

    #[test]
    fn order_zero_mixed_variation_is_the_fractional_variation() {
        let g = f("sqrt(x) + x^2");
        for dir in [Direction::Forward, Direction::Backward] {
            let a = mixed_variation(&g, 0.25, 0.01, 0, 0.7, dir).unwrap();
            let b = frac_variation(&g, 0.25, 0.01, 0.7, dir).unwrap();
            assert_relative_eq!(a.value, b.value, max_relative = 1e-13);
        }
    }

    #[test]
    fn normalization_products() {
        assert_eq!(normalization(0, 0.5, NormalizationVariant::Partial), 1.0);
        assert_relative_eq!(normalization(2, 0.5, NormalizationVariant::Partial), 3.75);
        assert_relative_eq!(normalization(0, 0.5, NormalizationVariant::Full), 0.5);
        assert_relative_eq!(normalization(2, 0.5, NormalizationVariant::Full), 1.875);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let g = f("x");
        assert!(matches!(
            frac_variation(&g, 0.0, 0.1, 1.5, Direction::Forward),
            Err(Error::UnsupportedExponent { .. })
        ));
        assert!(matches!(
            frac_variation(&g, 0.0, 0.1, 0.0, Direction::Forward),
            Err(Error::UnsupportedExponent { .. })
        ));
        assert!(delta(&g, 0.0, 0.0, Direction::Forward).is_err());
        assert!(delta(&g, 0.0, -0.5, Direction::Forward).is_err());
    }

    #[test]
    fn domain_errors_propagate() {
        let r = f("sqrt(x)");
        assert!(matches!(
            delta(&r, 0.0, 0.1, Direction::Backward),
            Err(Error::Domain { .. })
        ));
    }
}
