//! Expressions for user-supplied deformations and potentials.
//!
//! Derivatives of the deformation are taken symbolically so that the
//! Hamiltonian never sees a finite-differenced μ′ or μ″.

mod ast;
mod diff;
mod eval;
mod parse;
mod simplify;

pub use ast::{Ast, BinOp, Func};
pub use diff::differentiate;
pub use eval::{evaluate, evaluate_with, Bindings};
pub use parse::parse;
pub use simplify::simplify;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown function '{name}' at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("unknown identifier '{name}' at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
}

impl ExprError {
    /// 1-based byte position in the source text where the problem was found.
    pub fn offset(&self) -> Option<usize> {
        match self {
            ExprError::Empty => None,
            ExprError::Syntax { offset, .. }
            | ExprError::UnknownFunction { offset, .. }
            | ExprError::UnknownIdentifier { offset, .. } => Some(*offset),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{func} undefined at {arg}")]
    Domain { func: &'static str, arg: f64 },
    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },
    #[error("unbound parameter '{0}'")]
    Unbound(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Ast {
        parse(text, &["g", "a"]).unwrap()
    }

    fn at(a: &Ast, x: f64) -> f64 {
        evaluate(a, &Bindings::new(x).set("g", 0.7).set("a", 1.3)).unwrap()
    }

    #[test]
    fn parses_power() {
        assert_eq!(p("x^2"), Ast::pow(Ast::Var, 2));
    }

    #[test]
    fn parses_exponential_deformation() {
        let expected = Ast::sub(
            Ast::call(
                Func::Exp,
                Ast::neg(Ast::mul(Ast::param("g"), Ast::Var)),
            ),
            Ast::Const(1.0),
        );
        assert_eq!(p("exp(-g*x)-1"), expected);
    }

    #[test]
    fn unbalanced_paren_reports_offset() {
        let err = parse("1/(1+x", &[] as &[&str]).unwrap_err();
        assert!(matches!(err, ExprError::Syntax { offset: 7, .. }), "{err:?}");
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(
            parse("foo(x)", &[] as &[&str]),
            Err(ExprError::UnknownFunction { offset: 1, .. })
        ));
        assert!(matches!(
            parse("2*y", &[] as &[&str]),
            Err(ExprError::UnknownIdentifier { offset: 3, .. })
        ));
        assert!(parse("", &[] as &[&str]).is_err());
    }

    #[test]
    fn exponent_must_be_integer() {
        assert!(parse("x^1.5", &[] as &[&str]).is_err());
        assert_eq!(p("x^-2"), Ast::pow(Ast::Var, -2));
        assert_eq!(p("x^(-2)"), Ast::pow(Ast::Var, -2));
    }

    #[test]
    fn precedence() {
        assert_eq!(p("-x^2"), Ast::neg(Ast::pow(Ast::Var, 2)));
        assert_eq!(at(&p("-x^2"), 3.0), -9.0);
        assert_eq!(at(&p("2+3*x^2/6-1"), 2.0), 3.0);
        assert_eq!(at(&p("2*-x"), 2.0), -4.0);
        assert_eq!(at(&p("1-2-3"), 0.0), -4.0);
        assert_eq!(at(&p("8/2/2"), 0.0), 2.0);
        assert_eq!(at(&p("1.5e1 + .5"), 0.0), 15.5);
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(at(&p("x^2+1"), 2.0), 5.0);
        assert_eq!(at(&p("exp(x)"), 0.0), 1.0);
        let err = evaluate(&p("1/x"), &Bindings::new(0.0)).unwrap_err();
        assert_eq!(err, EvalError::DivisionByZero);
        assert!(matches!(
            evaluate(&p("ln(x)"), &Bindings::new(-1.0)),
            Err(EvalError::Domain { func: "ln", .. })
        ));
        assert!(matches!(
            evaluate(&p("exp(x)"), &Bindings::new(1000.0)),
            Err(EvalError::NonFinite { .. })
        ));
        assert!(matches!(
            evaluate(&p("g*x"), &Bindings::new(1.0)),
            Err(EvalError::Unbound(_))
        ));
    }

    #[test]
    fn derivative_examples() {
        let d = differentiate(&p("x^2"));
        assert_eq!(d, Ast::mul(Ast::Const(2.0), Ast::Var));
        let d = differentiate(&p("exp(-g*x)"));
        for x in [-1.0, 0.0, 0.5, 2.0] {
            let expect = -0.7 * (-0.7 * x as f64).exp();
            assert!((at(&d, x) - expect).abs() < 1e-15);
        }
        assert_eq!(differentiate(&Ast::Const(4.0)), Ast::Const(0.0));
        assert_eq!(differentiate(&p("g")), Ast::Const(0.0));
    }

    #[test]
    fn simplify_examples() {
        assert_eq!(simplify(&Ast::add(Ast::Const(0.0), Ast::Var)), Ast::Var);
        let e = Ast::call(Func::Exp, Ast::Var);
        assert_eq!(simplify(&Ast::mul(Ast::Const(1.0), e.clone())), e);
        assert_eq!(
            simplify(&Ast::mul(Ast::Const(2.0), Ast::Const(3.0))),
            Ast::Const(6.0)
        );
        assert_eq!(simplify(&Ast::pow(Ast::Var, 1)), Ast::Var);
        // 1/0 stays unfolded so the error surfaces at evaluation time
        let bad = Ast::div(Ast::Const(1.0), Ast::Const(0.0));
        assert_eq!(simplify(&bad), bad);
    }

    #[test]
    fn printing_reparses() {
        for text in [
            "exp(-g*x)-1",
            "-x^2",
            "(-x)^2",
            "2*-x*3",
            "a-(x-1)",
            "1/(x*a)",
            "--x",
            "x - -g*x",
            "sin(x)^3/(1+x^2)^-1",
            "pi*x",
        ] {
            let a = p(text);
            let printed = a.to_string();
            assert_eq!(p(&printed), a, "{text} -> {printed}");
        }
    }
}
