//! Fractional velocity: the coefficient of the leading `eps^beta` growth
//! of a one-sided increment.
//!
//! Run with: cargo run --example fractional_velocity

use holderkit::diffops::Direction;
use holderkit::exprlang::RealFn;
use holderkit::limits::{EpsSchedule, DEFAULT_TOL};
use holderkit::velocity::fractional_velocity;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let schedule = EpsSchedule::default();

    // asin(1 - x) behaves like asin(1) - sqrt(2 x) near 0: its forward
    // half-order velocity is -sqrt(2).
    let f = RealFn::parse("asin(1 - x)")?;
    let v = fractional_velocity(&f, 0.0, 0.5, Direction::Forward, &schedule, DEFAULT_TOL)?;
    println!(
        "asin(1-x), order 1/2 at 0: {}  (status {}, residual {:e})",
        v.value, v.estimate.status, v.estimate.residual_gamma
    );

    // The order acts as a critical filter. Below the Hölder grade the
    // velocity vanishes; at the grade it is finite; above it the quotient
    // blows up and the library refuses to report a number.
    let g = RealFn::parse("x^0.5")?;
    for beta in [0.25, 0.5, 0.75] {
        match fractional_velocity(&g, 0.0, beta, Direction::Forward, &schedule, DEFAULT_TOL) {
            Ok(v) => println!("x^0.5, order {beta} at 0: {}", v.value),
            Err(e) => println!("x^0.5, order {beta} at 0: {e}"),
        }
    }

    // Both directions exist independently; an even cusp has opposite
    // velocities on its two sides.
    let cusp = RealFn::parse("abs(x)^0.5")?;
    for dir in [Direction::Forward, Direction::Backward] {
        let v = fractional_velocity(&cusp, 0.0, 0.5, dir, &schedule, DEFAULT_TOL)?;
        println!("abs(x)^0.5, order 1/2 at 0, {dir}: {}", v.value);
    }
    Ok(())
}
