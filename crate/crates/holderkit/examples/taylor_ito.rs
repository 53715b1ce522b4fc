//! The compound differential rule for f(x, w(x)) with a half-rough signal
//! w: the square increment of w survives at first order and feeds the
//! second partial in w.
//!
//! Run with: cargo run --example taylor_ito

use holderkit::diffops::Direction;
use holderkit::exprlang::RealFn;
use holderkit::ito::{covariation, ito_derivative, ito_step_with, Compound2Fn};
use holderkit::limits::{EpsSchedule, DEFAULT_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let schedule = EpsSchedule::default();
    let f = Compound2Fn::parse("w^2 / 2")?;
    let w = RealFn::parse("sqrt(x)")?;

    // The covariation of sqrt(x) at 0 is 1: increments square to eps.
    let cov = covariation(&w, 0.0, Direction::Forward, &schedule, DEFAULT_TOL)?;
    println!("[w,w] of sqrt(x) at 0:    {}", cov.value);

    // At 0 the whole derivative of w(x)^2/2 = x/2 is covariation mass; at
    // 0.25 the same 1/2 arrives through the dw term instead. Both the
    // assembled expansion and the direct regularized composite agree.
    for at in [0.0, 0.25] {
        let d = ito_derivative(&f, &w, at, Direction::Forward, &schedule, DEFAULT_TOL)?;
        println!(
            "d[w^2/2] at {at}: {} = {} (partial_x) + {} (dw term) + {} (covariation term); direct {}",
            d.value, d.partial_x, d.w_term, d.covariation_term, d.direct
        );
    }

    // The one-step predictor at fixed eps. For the quadratic the expansion
    // is an algebraic identity and the residual vanishes; in general it
    // shrinks at least linearly in eps.
    let g = Compound2Fn::parse("exp(w)")?;
    println!("one-step residuals of exp(w(x)) at 0:");
    for eps in [1e-2, 1e-3, 1e-4] {
        let s = ito_step_with(&g, &w, 0.0, eps, Direction::Forward, 1.0)?;
        println!(
            "  eps = {eps:<6} predicted {:<22} actual {:<22} residual {:e}",
            s.predicted, s.actual, s.residual
        );
    }
    Ok(())
}
