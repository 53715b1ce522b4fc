//! Fractional Taylor expansion on the ladder eps^(alpha + k): coefficients
//! of asin(1 - x) at 0 and the accuracy of the truncated series.
//!
//! Run with: cargo run --example fractional_expansion

use holderkit::diffops::Direction;
use holderkit::expansion::{eval_series, frac_taylor_coeffs};
use holderkit::exprlang::RealFn;
use holderkit::limits::{EpsSchedule, DEFAULT_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = RealFn::parse("asin(1 - x)")?;
    let schedule = EpsSchedule::new(0.5, 0.7, 10)?;
    let series = frac_taylor_coeffs(&f, 0.0, 0.5, 4, Direction::Forward, &schedule, DEFAULT_TOL)?;

    println!("asin(1 - x) around 0, ladder eps^(k + 1/2):");
    println!("  constant term: {}", series.f_at_base);
    for (k, c) in series.coeffs.iter().enumerate() {
        println!(
            "  c_{k} (eps^{}) = {c:<24} [{}]",
            series.exponent(k),
            series.estimates[k].status
        );
    }

    // The closed forms: c_k = -(2k-1)!! / (k! (k + 1/2) 2^(2k + 1/2)).
    let closed = [
        -std::f64::consts::SQRT_2,
        -1.0 / (3.0 * 2f64.powf(1.5)),
        -3.0 / (5.0 * 2f64.powf(4.5)),
        -5.0 / (7.0 * 2f64.powf(6.5)),
        -35.0 / (9.0 * 2f64.powf(10.5)),
    ];
    let worst = series
        .coeffs
        .iter()
        .zip(closed)
        .map(|(c, e)| (c - e).abs())
        .fold(0.0f64, f64::max);
    println!("  worst deviation from the closed forms: {worst:e}");

    // The truncated series tracks the function to its ladder order.
    println!("remainder |f(eps) - series(eps)|:");
    for eps in [1e-1, 1e-2, 1e-3] {
        let err = (f.eval(eps)? - eval_series(&series, eps)?).abs();
        println!("  eps = {eps:<6} -> {err:e}");
    }
    Ok(())
}
