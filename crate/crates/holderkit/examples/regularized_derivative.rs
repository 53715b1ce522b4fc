//! Derivative regularization: subtract the fractional kernel K eps^beta
//! from the increment and divide by eps; what is left is the rate of the
//! differentiable part.
//!
//! Run with: cargo run --example regularized_derivative

use holderkit::diffops::Direction;
use holderkit::exprlang::RealFn;
use holderkit::limits::{EpsSchedule, DEFAULT_TOL};
use holderkit::regularize::{
    multi_regularized_derivative, orthogonality_check, regularized_derivative, ExponentLadder,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let schedule = EpsSchedule::default();

    // x + sqrt(x) at 0: the raw quotient diverges, but after removing the
    // kernel 1 * eps^(1/2) the residual increment is exactly x.
    let f = RealFn::parse("x + sqrt(x)")?;
    let d = regularized_derivative(&f, 0.0, 0.5, Direction::Forward, &schedule, DEFAULT_TOL)?;
    println!(
        "x + sqrt(x) at 0: kernel {} * eps^0.5, regularized derivative {}",
        d.kernel_constant, d.value
    );

    // A smooth function has a zero kernel and the classical derivative.
    let smooth = RealFn::parse("x^3")?;
    let ds = regularized_derivative(&smooth, 0.4, 0.5, Direction::Forward, &schedule, DEFAULT_TOL)?;
    println!(
        "x^3 at 0.4:       kernel {} * eps^0.5, regularized derivative {}",
        ds.kernel_constant, ds.value
    );

    // Several grades at once: peel an ascending ladder of exponents, then
    // the integer terms, and quotient what remains.
    let layered = RealFn::parse("x^0.3 + x^0.5 + x + 0.25 * x^1.5")?;
    let ladder = ExponentLadder::new(vec![0.3, 0.5])?;
    let m = multi_regularized_derivative(
        &layered,
        0.0,
        &ladder,
        1,
        Direction::Forward,
        &schedule,
        DEFAULT_TOL,
    )?;
    println!(
        "x^0.3 + x^0.5 + x + 0.25 x^1.5 at 0: order 1+{} residue {}",
        m.beta_used, m.value
    );

    // Grades do not mix: for a purely fractional function the regularized
    // derivative annihilates what the velocity sees, so their product is 0.
    let pure = RealFn::parse("3 * sqrt(x)")?;
    let orth = orthogonality_check(&pure, 0.0, 0.5, Direction::Forward, &schedule, DEFAULT_TOL)?;
    println!(
        "3 sqrt(x) at 0:   velocity {} x regularized {} = {}",
        orth.velocity, orth.reg_deriv, orth.product
    );
    Ok(())
}
