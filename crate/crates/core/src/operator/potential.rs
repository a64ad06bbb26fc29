use std::collections::BTreeMap;

use crate::expr::{self, Ast, EvalError, ExprError, Func};

/// Potential V(x) as an expression plus its parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    label: String,
    ast: Ast,
    params: BTreeMap<String, f64>,
}

impl Potential {
    pub fn zero() -> Potential {
        Potential {
            label: "zero".into(),
            ast: Ast::Const(0.0),
            params: BTreeMap::new(),
        }
    }

    /// `V₀(1 − e^{γx})²`; the wall at x ≤ 0 comes from the grid, not from here.
    pub fn half_morse(v0: f64, gamma: f64) -> Potential {
        let ast = Ast::mul(
            Ast::param("v0"),
            Ast::pow(
                Ast::sub(
                    Ast::Const(1.0),
                    Ast::call(Func::Exp, Ast::mul(Ast::param("gamma"), Ast::Var)),
                ),
                2,
            ),
        );
        Potential {
            label: format!("half-morse(v0={v0}, gamma={gamma})"),
            ast,
            params: BTreeMap::from([("gamma".into(), gamma), ("v0".into(), v0)]),
        }
    }

    pub fn from_expression(text: &str, params: BTreeMap<String, f64>) -> Result<Potential, ExprError> {
        let names: Vec<&str> = params.keys().map(String::as_str).collect();
        let ast = expr::parse(text, &names)?;
        Ok(Potential {
            label: format!("expr({text})"),
            ast,
            params,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ast(&self) -> &Ast {
        &self.ast
    }

    pub fn is_constant(&self) -> bool {
        self.ast.is_independent_of_x()
    }

    pub fn is_zero(&self) -> bool {
        self.ast == Ast::Const(0.0)
    }

    pub fn evaluate(&self, x: f64) -> Result<f64, EvalError> {
        expr::evaluate_with(&self.ast, x, &|name| self.params.get(name).copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_morse_values() {
        let v = Potential::half_morse(1.0, 1.0);
        assert_eq!(v.evaluate(0.0).unwrap(), 0.0);
        let x: f64 = 0.7;
        assert!((v.evaluate(x).unwrap() - (1.0 - x.exp()).powi(2)).abs() < 1e-15);
        assert!(!v.is_constant());
        assert!(Potential::zero().is_zero());
    }

    #[test]
    fn expression_potential() {
        let v = Potential::from_expression("k*x^2/2", BTreeMap::from([("k".into(), 4.0)])).unwrap();
        assert_eq!(v.evaluate(3.0).unwrap(), 18.0);
        assert!(Potential::from_expression("k*x", BTreeMap::new()).is_err());
    }
}
