use super::ast::{Ast, BinOp, Func};
use super::simplify;

/// Exact derivative with respect to `x`, constant-folded.
pub fn differentiate(a: &Ast) -> Ast {
    simplify(&derive(a))
}

fn derive(a: &Ast) -> Ast {
    match a {
        Ast::Const(_) | Ast::Param(_) => Ast::Const(0.0),
        Ast::Var => Ast::Const(1.0),
        Ast::Neg(u) => Ast::neg(derive(u)),
        Ast::Binary(op, u, v) => {
            let (du, dv) = (derive(u), derive(v));
            let (u, v) = ((**u).clone(), (**v).clone());
            match op {
                BinOp::Add => Ast::add(du, dv),
                BinOp::Sub => Ast::sub(du, dv),
                BinOp::Mul => Ast::add(Ast::mul(du, v), Ast::mul(u, dv)),
                BinOp::Div => Ast::div(
                    Ast::sub(Ast::mul(du, v.clone()), Ast::mul(u, dv)),
                    Ast::pow(v, 2),
                ),
            }
        }
        Ast::Pow(u, n) => {
            if *n == 0 {
                return Ast::Const(0.0);
            }
            Ast::mul(
                Ast::mul(Ast::Const(*n as f64), Ast::pow((**u).clone(), n - 1)),
                derive(u),
            )
        }
        Ast::Call(f, u) => {
            let du = derive(u);
            let u = (**u).clone();
            let outer = match f {
                Func::Exp => Ast::call(Func::Exp, u),
                Func::Sin => Ast::call(Func::Cos, u),
                Func::Cos => Ast::neg(Ast::call(Func::Sin, u)),
                Func::Tan => Ast::add(Ast::Const(1.0), Ast::pow(Ast::call(Func::Tan, u), 2)),
                Func::Arctan => Ast::div(
                    Ast::Const(1.0),
                    Ast::add(Ast::Const(1.0), Ast::pow(u, 2)),
                ),
                Func::Sqrt => Ast::div(
                    Ast::Const(1.0),
                    Ast::mul(Ast::Const(2.0), Ast::call(Func::Sqrt, u)),
                ),
                Func::Ln => Ast::div(Ast::Const(1.0), u),
            };
            Ast::mul(outer, du)
        }
    }
}
