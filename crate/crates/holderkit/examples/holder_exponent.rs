//! Estimate the pointwise Hölder exponent from the decay of one-sided
//! increments, then certify it with the velocity at that grade.
//!
//! Run with: cargo run --example holder_exponent

use holderkit::diffops::Direction;
use holderkit::exprlang::RealFn;
use holderkit::limits::{EpsSchedule, DEFAULT_TOL};
use holderkit::velocity::holder_exponent;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let schedule = EpsSchedule::default();
    let cases = [
        ("abs(x)^0.3", 0.0),
        ("x + sqrt(x)", 0.0),  // the root term dominates near 0
        ("sin(x)", 0.5),       // smooth: slope saturates at 1
        ("x^2", 0.0),          // increments decay faster than any grade <= 1
    ];
    for (src, at) in cases {
        let f = RealFn::parse(src)?;
        let report = holder_exponent(&f, at, Direction::Forward, &schedule, DEFAULT_TOL)?;
        println!(
            "{src:<12} at {at}: alpha_hat = {:<20} velocity {} ({}), fit residual {:e}",
            report.alpha_hat,
            report.velocity.value,
            report.velocity.status,
            report.fit_residual
        );
    }
    Ok(())
}
