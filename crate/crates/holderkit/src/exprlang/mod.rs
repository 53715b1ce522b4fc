//! A small expression language for real functions of one variable (`x`), or
//! two (`x`, `w`) for compound functions.
//!
//! The language has `+ - * / ^`, unary minus, parentheses, decimal literals,
//! the constants `pi` and `e`, and the function set `sqrt sin cos asin acos
//! atan exp ln abs`. Parsing performs no simplification whatsoever: printing
//! a parse tree and re-parsing the output reproduces the tree node for node.
//! Symbolic differentiation, by contrast, folds constants and erases `0`/`1`
//! identities so that repeated derivatives stay readable.
//!
//! Power semantics are chosen for real-analysis work on one-sided
//! neighbourhoods: an exponent that is a constant integer is evaluated with
//! integer powers (so `x^2` is fine at negative `x`), while a fractional or
//! variable exponent requires a positive base; `0^0 = 1`.

mod parser;
mod realfn;

pub use parser::{parse, parse_xw};
pub use realfn::RealFn;

use std::fmt;

use crate::error::{Error, Result};

/// Variables recognized by the language. `w` only appears in two-variable
/// (compound) expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    W,
}

impl Var {
    fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::W => "w",
        }
    }
}

/// Built-in unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Sin,
    Cos,
    Asin,
    Acos,
    Atan,
    Exp,
    Ln,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Asin => "asin",
            Func::Acos => "acos",
            Func::Atan => "atan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "asin" => Func::Asin,
            "acos" => Func::Acos,
            "atan" => Func::Atan,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sqrt => v.sqrt(),
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Asin => v.asin(),
            Func::Acos => v.acos(),
            Func::Atan => v.atan(),
            Func::Exp => v.exp(),
            Func::Ln => v.ln(),
            Func::Abs => v.abs(),
        }
    }
}

/// Expression syntax tree.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Num(f64),
    Var(Var),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, Box<ExprAst>),
    Neg(Box<ExprAst>),
    Call(Func, Box<ExprAst>),
}

fn bx(e: ExprAst) -> Box<ExprAst> {
    Box::new(e)
}

pub fn num(c: f64) -> ExprAst {
    ExprAst::Num(c)
}

pub fn var(v: Var) -> ExprAst {
    ExprAst::Var(v)
}

/// Folding constructor: `a + b` with constant folding and `0` elimination.
pub fn add(a: ExprAst, b: ExprAst) -> ExprAst {
    match (a, b) {
        (ExprAst::Num(x), ExprAst::Num(y)) if (x + y).is_finite() => ExprAst::Num(x + y),
        (ExprAst::Num(z), b) if z == 0.0 => b,
        (a, ExprAst::Num(z)) if z == 0.0 => a,
        (a, b) => ExprAst::Add(bx(a), bx(b)),
    }
}

/// Folding constructor: `a - b`.
pub fn sub(a: ExprAst, b: ExprAst) -> ExprAst {
    match (a, b) {
        (ExprAst::Num(x), ExprAst::Num(y)) if (x - y).is_finite() => ExprAst::Num(x - y),
        (ExprAst::Num(z), b) if z == 0.0 => neg(b),
        (a, ExprAst::Num(z)) if z == 0.0 => a,
        (a, b) => ExprAst::Sub(bx(a), bx(b)),
    }
}

/// Folding constructor: `a * b`. A literal zero factor absorbs the other
/// operand (the usual algebraic convention for derivative construction).
pub fn mul(a: ExprAst, b: ExprAst) -> ExprAst {
    match (a, b) {
        (ExprAst::Num(x), ExprAst::Num(y)) if (x * y).is_finite() => ExprAst::Num(x * y),
        (ExprAst::Num(z), _) | (_, ExprAst::Num(z)) if z == 0.0 => ExprAst::Num(0.0),
        (ExprAst::Num(o), b) if o == 1.0 => b,
        (a, ExprAst::Num(o)) if o == 1.0 => a,
        (a, b) => ExprAst::Mul(bx(a), bx(b)),
    }
}

/// Folding constructor: `a / b`.
pub fn div(a: ExprAst, b: ExprAst) -> ExprAst {
    match (a, b) {
        (ExprAst::Num(x), ExprAst::Num(y)) if y != 0.0 && (x / y).is_finite() => {
            ExprAst::Num(x / y)
        }
        (ExprAst::Num(z), _) if z == 0.0 => ExprAst::Num(0.0),
        (a, ExprAst::Num(o)) if o == 1.0 => a,
        (a, b) => ExprAst::Div(bx(a), bx(b)),
    }
}

/// Folding constructor: `a ^ b`, matching [`ExprAst::eval`]'s power semantics.
pub fn pow(a: ExprAst, b: ExprAst) -> ExprAst {
    match (a, b) {
        (a, ExprAst::Num(e)) if e == 1.0 => a,
        (_, ExprAst::Num(e)) if e == 0.0 => ExprAst::Num(1.0),
        (ExprAst::Num(x), ExprAst::Num(y)) => {
            let v = pow_value(x, y);
            if v.is_finite() {
                ExprAst::Num(v)
            } else {
                ExprAst::Pow(bx(ExprAst::Num(x)), bx(ExprAst::Num(y)))
            }
        }
        (a, b) => ExprAst::Pow(bx(a), bx(b)),
    }
}

/// Folding constructor: `-a`.
pub fn neg(a: ExprAst) -> ExprAst {
    match a {
        ExprAst::Num(c) => ExprAst::Num(-c),
        ExprAst::Neg(inner) => *inner,
        a => ExprAst::Neg(bx(a)),
    }
}

/// Folding constructor: `f(a)`.
pub fn call(f: Func, a: ExprAst) -> ExprAst {
    match a {
        ExprAst::Num(c) => {
            let v = f.apply(c);
            if v.is_finite() {
                ExprAst::Num(v)
            } else {
                ExprAst::Call(f, bx(ExprAst::Num(c)))
            }
        }
        a => ExprAst::Call(f, bx(a)),
    }
}

/// Power evaluation shared by `eval` and constant folding: constant integer
/// exponents go through `powi` (valid for any base), everything else requires
/// a positive base, and `0^0 = 1`.
fn pow_value(base: f64, expo: f64) -> f64 {
    if expo.fract() == 0.0 && expo.abs() <= i32::MAX as f64 {
        return base.powi(expo as i32);
    }
    if base > 0.0 {
        base.powf(expo)
    } else if base == 0.0 {
        if expo > 0.0 {
            0.0
        } else {
            f64::NAN
        }
    } else {
        f64::NAN
    }
}

impl ExprAst {
    /// Does the tree mention `v`?
    pub fn contains(&self, v: Var) -> bool {
        match self {
            ExprAst::Num(_) => false,
            ExprAst::Var(u) => *u == v,
            ExprAst::Add(a, b)
            | ExprAst::Sub(a, b)
            | ExprAst::Mul(a, b)
            | ExprAst::Div(a, b)
            | ExprAst::Pow(a, b) => a.contains(v) || b.contains(v),
            ExprAst::Neg(a) | ExprAst::Call(_, a) => a.contains(v),
        }
    }

    fn has_vars(&self) -> bool {
        self.contains(Var::X) || self.contains(Var::W)
    }

    /// Value of a variable-free subtree, if it is one and evaluates finitely.
    pub fn const_value(&self) -> Option<f64> {
        if self.has_vars() {
            return None;
        }
        let v = self.eval_raw(f64::NAN, f64::NAN);
        v.is_finite().then_some(v)
    }

    /// Evaluate at `x` (single-variable trees).
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = self.eval_raw(x, f64::NAN);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain { x })
        }
    }

    /// Evaluate a two-variable tree at `(x, w)`.
    pub fn eval_xw(&self, x: f64, w: f64) -> Result<f64> {
        let v = self.eval_raw(x, w);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain { x })
        }
    }

    fn eval_raw(&self, x: f64, w: f64) -> f64 {
        match self {
            ExprAst::Num(c) => *c,
            ExprAst::Var(Var::X) => x,
            ExprAst::Var(Var::W) => w,
            ExprAst::Add(a, b) => a.eval_raw(x, w) + b.eval_raw(x, w),
            ExprAst::Sub(a, b) => a.eval_raw(x, w) - b.eval_raw(x, w),
            ExprAst::Mul(a, b) => a.eval_raw(x, w) * b.eval_raw(x, w),
            ExprAst::Div(a, b) => a.eval_raw(x, w) / b.eval_raw(x, w),
            ExprAst::Pow(a, b) => {
                let base = a.eval_raw(x, w);
                // Constant integer exponents use integer powers even when the
                // exponent is written as an expression like `-(2)`.
                if let Some(e) = b.const_value() {
                    pow_value(base, e)
                } else {
                    pow_value_fractional_only(base, b.eval_raw(x, w))
                }
            }
            ExprAst::Neg(a) => -a.eval_raw(x, w),
            ExprAst::Call(f, a) => f.apply(a.eval_raw(x, w)),
        }
    }
}

/// Power with a genuinely variable exponent: positive bases only.
fn pow_value_fractional_only(base: f64, expo: f64) -> f64 {
    if base > 0.0 {
        base.powf(expo)
    } else if base == 0.0 {
        if expo > 0.0 {
            0.0
        } else if expo == 0.0 {
            1.0
        } else {
            f64::NAN
        }
    } else {
        f64::NAN
    }
}

/// Symbolic derivative of `e` with respect to `v`, with folding.
pub fn differentiate(e: &ExprAst, v: Var) -> ExprAst {
    let d = |u: &ExprAst| differentiate(u, v);
    match e {
        ExprAst::Num(_) => num(0.0),
        ExprAst::Var(u) => num(if *u == v { 1.0 } else { 0.0 }),
        ExprAst::Add(a, b) => add(d(a), d(b)),
        ExprAst::Sub(a, b) => sub(d(a), d(b)),
        ExprAst::Mul(a, b) => add(mul(d(a), (**b).clone()), mul((**a).clone(), d(b))),
        ExprAst::Div(a, b) => div(
            sub(mul(d(a), (**b).clone()), mul((**a).clone(), d(b))),
            pow((**b).clone(), num(2.0)),
        ),
        ExprAst::Pow(a, b) => {
            if let Some(c) = b.const_value() {
                // (u^c)' = c u^(c-1) u'
                mul(mul(num(c), pow((**a).clone(), num(c - 1.0))), d(a))
            } else {
                // (u^v)' = u^v (v' ln u + v u'/u)
                mul(
                    e.clone(),
                    add(
                        mul(d(b), call(Func::Ln, (**a).clone())),
                        mul((**b).clone(), div(d(a), (**a).clone())),
                    ),
                )
            }
        }
        ExprAst::Neg(a) => neg(d(a)),
        ExprAst::Call(f, a) => mul(call_derivative(*f, a), d(a)),
    }
}

fn call_derivative(f: Func, a: &ExprAst) -> ExprAst {
    let a = a.clone();
    match f {
        Func::Sqrt => div(num(0.5), call(Func::Sqrt, a)),
        Func::Sin => call(Func::Cos, a),
        Func::Cos => neg(call(Func::Sin, a)),
        Func::Asin => div(num(1.0), call(Func::Sqrt, sub(num(1.0), pow(a, num(2.0))))),
        Func::Acos => neg(div(num(1.0), call(Func::Sqrt, sub(num(1.0), pow(a, num(2.0)))))),
        Func::Atan => div(num(1.0), add(num(1.0), pow(a, num(2.0)))),
        Func::Exp => call(Func::Exp, a),
        Func::Ln => div(num(1.0), a),
        // sign(u), undefined at u = 0 — evaluation reports a domain error there.
        Func::Abs => div(a.clone(), call(Func::Abs, a)),
    }
}

/// Replace every occurrence of `v` by `replacement`, folding as it rebuilds.
pub fn substitute(e: &ExprAst, v: Var, replacement: &ExprAst) -> ExprAst {
    let s = |u: &ExprAst| substitute(u, v, replacement);
    match e {
        ExprAst::Num(c) => num(*c),
        ExprAst::Var(u) => {
            if *u == v {
                replacement.clone()
            } else {
                var(*u)
            }
        }
        ExprAst::Add(a, b) => add(s(a), s(b)),
        ExprAst::Sub(a, b) => sub(s(a), s(b)),
        ExprAst::Mul(a, b) => mul(s(a), s(b)),
        ExprAst::Div(a, b) => div(s(a), s(b)),
        ExprAst::Pow(a, b) => pow(s(a), s(b)),
        ExprAst::Neg(a) => neg(s(a)),
        ExprAst::Call(f, a) => call(*f, s(a)),
    }
}

// Printing: each node knows its precedence; children are parenthesized
// whenever their precedence falls below what their position requires, which
// is exactly the condition for the parser to rebuild the original tree.
const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(e: &ExprAst) -> u8 {
    match e {
        ExprAst::Add(..) | ExprAst::Sub(..) => PREC_ADD,
        ExprAst::Mul(..) | ExprAst::Div(..) => PREC_MUL,
        // A negative literal prints with a leading minus, so it binds like one.
        ExprAst::Neg(..) => PREC_NEG,
        ExprAst::Num(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => PREC_NEG,
        ExprAst::Num(_) | ExprAst::Var(_) | ExprAst::Call(..) => PREC_ATOM,
        ExprAst::Pow(..) => PREC_POW,
    }
}

fn fmt_prec(e: &ExprAst, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let p = precedence(e);
    if p < min {
        write!(out, "(")?;
        fmt_prec(e, 0, out)?;
        return write!(out, ")");
    }
    match e {
        ExprAst::Num(c) => write!(out, "{c}"),
        ExprAst::Var(v) => write!(out, "{}", v.name()),
        ExprAst::Add(a, b) => {
            fmt_prec(a, PREC_ADD, out)?;
            write!(out, " + ")?;
            fmt_prec(b, PREC_ADD + 1, out)
        }
        ExprAst::Sub(a, b) => {
            fmt_prec(a, PREC_ADD, out)?;
            write!(out, " - ")?;
            fmt_prec(b, PREC_ADD + 1, out)
        }
        ExprAst::Mul(a, b) => {
            fmt_prec(a, PREC_MUL, out)?;
            write!(out, " * ")?;
            fmt_prec(b, PREC_MUL + 1, out)
        }
        ExprAst::Div(a, b) => {
            fmt_prec(a, PREC_MUL, out)?;
            write!(out, " / ")?;
            fmt_prec(b, PREC_MUL + 1, out)
        }
        // `^` is right-associative and binds tighter than unary minus, so the
        // base must be an atom and the exponent may be another power.
        ExprAst::Pow(a, b) => {
            fmt_prec(a, PREC_ATOM, out)?;
            write!(out, "^")?;
            fmt_prec(b, PREC_POW, out)
        }
        ExprAst::Neg(a) => {
            write!(out, "-")?;
            fmt_prec(a, PREC_POW, out)
        }
        ExprAst::Call(f, a) => {
            write!(out, "{}(", f.name())?;
            fmt_prec(a, 0, out)?;
            write!(out, ")")
        }
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_prec(self, 0, out)
    }
}
