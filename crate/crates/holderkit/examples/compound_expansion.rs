//! Expansion of a compound function g(x^alpha) on the multiplicative
//! ladder eps^(alpha * k): smooth outer function, fractional inner power.
//!
//! Run with: cargo run --example compound_expansion

use holderkit::diffops::Direction;
use holderkit::expansion::{compound_power_coeffs, eval_series};
use holderkit::exprlang::RealFn;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // cos(x^(1/3)) around 0: the outer series of cos evaluated at u = x^(1/3).
    let g = RealFn::parse("cos(x)")?;
    let alpha = 1.0 / 3.0;
    let series = compound_power_coeffs(&g, 0.0, alpha, 8, Direction::Forward)?;

    println!("cos(x^(1/3)) around 0, ladder eps^(k/3):");
    println!("  constant term: {}", series.f_at_base);
    for (k, c) in series.coeffs.iter().enumerate() {
        if *c != 0.0 {
            println!("  c_{k} (eps^{}) = {c}", series.exponent(k));
        }
    }

    // Five nonzero terms already track the function to ~1e-7 on (0, 1/2].
    let f = RealFn::parse("cos(x^0.33333333333333333)")?;
    let mut worst = 0.0f64;
    for i in 1..=50 {
        let x = 0.01 * i as f64;
        worst = worst.max((f.eval(x)? - eval_series(&series, x)?).abs());
    }
    println!("  max |cos(x^(1/3)) - series| on (0, 0.5]: {worst:e}");
    Ok(())
}
