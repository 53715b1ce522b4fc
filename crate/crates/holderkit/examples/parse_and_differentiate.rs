//! Parse a formula, evaluate it, and take symbolic derivatives.
//!
//! Run with: cargo run --example parse_and_differentiate

use holderkit::exprlang::{differentiate, parse, RealFn, Var};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A RealFn wraps an expression tree (or a native closure) behind one
    // evaluation interface.
    let f = RealFn::parse("x + sqrt(x) * sin(x^2)")?;
    println!("f(0.81)   -> {}", f.eval(0.81)?);

    // Derivatives are symbolic: the tree is differentiated and folded, so
    // they can be differentiated again.
    let df = f.derivative()?;
    let ddf = df.derivative()?;
    println!("f'(0.81)  -> {}", df.eval(0.81)?);
    println!("f''(0.81) -> {}", ddf.eval(0.81)?);

    // The raw tree interface, for callers that transform expressions.
    let tree = parse("asin(1 - x)")?;
    let slope = differentiate(&tree, Var::X);
    println!("d/dx asin(1-x) = {slope}");

    // Domains are enforced: stepping left of zero leaves the real line.
    let root = RealFn::parse("sqrt(x)")?;
    match root.eval(-0.25) {
        Ok(v) => println!("sqrt(-0.25) = {v}?!"),
        Err(e) => println!("sqrt(-0.25): {e}"),
    }
    Ok(())
}
