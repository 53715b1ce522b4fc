//! Remainder of a truncated fractional expansion over a step grid, and the
//! slope that certifies the order of the first neglected term.
//!
//! Run with: cargo run --example error_curve

use holderkit::diffops::Direction;
use holderkit::expansion::{error_curve, frac_taylor_coeffs, log_grid};
use holderkit::exprlang::RealFn;
use holderkit::limits::{loglog_slope, EpsSchedule, DEFAULT_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = RealFn::parse("asin(1 - x)")?;
    let schedule = EpsSchedule::new(0.5, 0.7, 10)?;
    let series = frac_taylor_coeffs(&f, 0.0, 0.5, 4, Direction::Forward, &schedule, DEFAULT_TOL)?;

    // |f(eps) - series(eps)| over a logarithmic grid. The residuals are
    // formed in double-double arithmetic where the inputs allow it, so the
    // curve stays clean far below f64 resolution.
    let grid = log_grid(1e-4, 1e-1, 64)?;
    let curve = error_curve(&f, &series, &grid)?;

    println!("x,abs_error");
    for (x, e) in curve.points.iter().step_by(9) {
        println!("{x:.3e},{e:.6e}");
    }

    // Five terms are in the series (exponents 1/2 .. 9/2), so the first
    // neglected exponent is 11/2: slope 5.5 on a log-log plot.
    let slope = loglog_slope(&curve.points)?;
    println!("log-log slope: {slope}  (first neglected exponent 11/2)");
    Ok(())
}
