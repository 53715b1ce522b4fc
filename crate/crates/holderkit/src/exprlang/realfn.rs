//! Runtime-callable real functions.
//!
//! A [`RealFn`] is either expression-backed (and then differentiable to any
//! order symbolically) or native (a Rust closure, differentiable only as far
//! as derivatives were registered). Both carry an open domain interval; the
//! default is the whole line, and evaluation outside the interval is a
//! domain error rather than a NaN.

use std::fmt;
use std::sync::Arc;

use super::{differentiate, parse, ExprAst, Var};
use crate::error::{Error, Result};

#[derive(Clone)]
enum Repr {
    Ast(Arc<ExprAst>),
    Native {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        derivative: Option<Arc<RealFn>>,
    },
}

/// A real function of one variable, evaluable and (when possible) differentiable.
#[derive(Clone)]
pub struct RealFn {
    repr: Repr,
    domain: (f64, f64),
}

impl RealFn {
    /// Parse an expression in `x`.
    pub fn parse(src: &str) -> Result<RealFn> {
        Ok(RealFn::from_ast(parse(src)?))
    }

    pub fn from_ast(ast: ExprAst) -> RealFn {
        RealFn {
            repr: Repr::Ast(Arc::new(ast)),
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Wrap a closure. The resulting function has no symbolic derivative;
    /// register one with [`RealFn::native_with_derivative`] if a numeric
    /// routine needs it.
    pub fn native(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RealFn {
        RealFn {
            repr: Repr::Native {
                f: Arc::new(f),
                derivative: None,
            },
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn native_with_derivative(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: RealFn,
    ) -> RealFn {
        RealFn {
            repr: Repr::Native {
                f: Arc::new(f),
                derivative: Some(Arc::new(derivative)),
            },
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Restrict the function to the open interval `(lo, hi)`.
    pub fn with_domain(mut self, lo: f64, hi: f64) -> RealFn {
        self.domain = (lo, hi);
        self
    }

    /// The expression tree, when this function is expression-backed.
    pub fn ast(&self) -> Option<&ExprAst> {
        match &self.repr {
            Repr::Ast(ast) => Some(ast),
            Repr::Native { .. } => None,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > self.domain.0 && x < self.domain.1) {
            return Err(Error::Domain { x });
        }
        match &self.repr {
            Repr::Ast(ast) => ast.eval(x),
            Repr::Native { f, .. } => {
                let v = f(x);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Domain { x })
                }
            }
        }
    }

    /// First derivative: symbolic for expression-backed functions, the
    /// registered derivative for native ones.
    pub fn derivative(&self) -> Result<RealFn> {
        match &self.repr {
            Repr::Ast(ast) => Ok(RealFn {
                repr: Repr::Ast(Arc::new(differentiate(ast, Var::X))),
                domain: self.domain,
            }),
            Repr::Native { derivative, .. } => derivative
                .as_deref()
                .cloned()
                .ok_or(Error::MissingDerivative { order: 1 }),
        }
    }

    /// `n`-th derivative (`n = 0` returns a clone).
    pub fn derivative_n(&self, n: usize) -> Result<RealFn> {
        let mut f = self.clone();
        for k in 0..n {
            f = f.derivative().map_err(|e| match e {
                Error::MissingDerivative { .. } => Error::MissingDerivative { order: k + 1 },
                other => other,
            })?;
        }
        Ok(f)
    }
}

impl fmt::Debug for RealFn {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Ast(ast) => write!(out, "RealFn({ast})"),
            Repr::Native { .. } => write!(out, "RealFn(<native>)"),
        }
    }
}
