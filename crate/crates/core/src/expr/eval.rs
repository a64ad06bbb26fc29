use std::collections::BTreeMap;

use super::ast::{Ast, BinOp, Func};
use super::EvalError;

/// Value of `x` plus the parameter table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Bindings {
    pub x: f64,
    pub params: BTreeMap<String, f64>,
}

impl Bindings {
    pub fn new(x: f64) -> Self {
        Bindings {
            x,
            params: BTreeMap::new(),
        }
    }

    pub fn with_params(x: f64, params: BTreeMap<String, f64>) -> Self {
        Bindings { x, params }
    }

    pub fn set(mut self, name: impl Into<String>, value: f64) -> Self {
        self.params.insert(name.into(), value);
        self
    }

    pub fn at(&self, x: f64) -> Bindings {
        Bindings {
            x,
            params: self.params.clone(),
        }
    }
}

fn finite(value: f64, what: &'static str) -> Result<f64, EvalError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(EvalError::NonFinite { what })
    }
}

pub fn evaluate(a: &Ast, b: &Bindings) -> Result<f64, EvalError> {
    evaluate_with(a, b.x, &|name| b.params.get(name).copied())
}

/// Evaluation with a caller-supplied parameter lookup; avoids cloning
/// the parameter map in tight loops.
pub fn evaluate_with(
    a: &Ast,
    x: f64,
    lookup: &dyn Fn(&str) -> Option<f64>,
) -> Result<f64, EvalError> {
    match a {
        Ast::Const(c) => Ok(*c),
        Ast::Var => finite(x, "variable"),
        Ast::Param(name) => {
            let v = lookup(name).ok_or_else(|| EvalError::Unbound(name.clone()))?;
            finite(v, "parameter")
        }
        Ast::Neg(a) => Ok(-evaluate_with(a, x, lookup)?),
        Ast::Binary(op, l, r) => {
            let l = evaluate_with(l, x, lookup)?;
            let r = evaluate_with(r, x, lookup)?;
            let v = match op {
                BinOp::Add => l + r,
                BinOp::Sub => l - r,
                BinOp::Mul => l * r,
                BinOp::Div => {
                    if r == 0.0 {
                        return Err(EvalError::DivisionByZero);
                    }
                    l / r
                }
            };
            finite(v, "arithmetic")
        }
        Ast::Pow(base, n) => {
            let b = evaluate_with(base, x, lookup)?;
            if *n < 0 && b == 0.0 {
                return Err(EvalError::DivisionByZero);
            }
            finite(b.powi(*n), "power")
        }
        Ast::Call(f, arg) => {
            let u = evaluate_with(arg, x, lookup)?;
            let v = match f {
                Func::Exp => u.exp(),
                Func::Sin => u.sin(),
                Func::Cos => u.cos(),
                Func::Tan => u.tan(),
                Func::Arctan => u.atan(),
                Func::Sqrt => {
                    if u < 0.0 {
                        return Err(EvalError::Domain { func: "sqrt", arg: u });
                    }
                    u.sqrt()
                }
                Func::Ln => {
                    if u <= 0.0 {
                        return Err(EvalError::Domain { func: "ln", arg: u });
                    }
                    u.ln()
                }
            };
            finite(v, f.name())
        }
    }
}
