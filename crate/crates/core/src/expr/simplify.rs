use super::ast::{Ast, BinOp};
use super::eval::evaluate_with;

/// Constant folding plus the identities 0+e, e-0, 1*e, e/1, 0*e, e^1, e^0
/// and double negation. No term collection.
pub fn simplify(a: &Ast) -> Ast {
    match a {
        Ast::Const(_) | Ast::Var | Ast::Param(_) => a.clone(),
        Ast::Neg(u) => match simplify(u) {
            Ast::Const(c) => Ast::Const(-c),
            Ast::Neg(inner) => *inner,
            s => Ast::neg(s),
        },
        Ast::Binary(op, l, r) => fold_binary(*op, simplify(l), simplify(r)),
        Ast::Pow(u, n) => {
            let s = simplify(u);
            match (*n, &s) {
                (0, _) => Ast::Const(1.0),
                (1, _) => s,
                (_, Ast::Const(c)) => fold_or(Ast::pow(s.clone(), *n), *c == 0.0 && *n < 0),
                _ => Ast::pow(s, *n),
            }
        }
        Ast::Call(f, u) => {
            let s = simplify(u);
            let is_const = matches!(s, Ast::Const(_));
            let call = Ast::call(*f, s);
            if is_const {
                fold_or(call, false)
            } else {
                call
            }
        }
    }
}

// Folds a parameter- and variable-free node; leaves it alone when the
// folded value would be an evaluation error.
fn fold_or(node: Ast, keep: bool) -> Ast {
    if keep {
        return node;
    }
    match evaluate_with(&node, 0.0, &|_| None) {
        Ok(v) => Ast::Const(v),
        Err(_) => node,
    }
}

fn is_const(a: &Ast, value: f64) -> bool {
    matches!(a, Ast::Const(c) if *c == value)
}

fn fold_binary(op: BinOp, l: Ast, r: Ast) -> Ast {
    if let (Ast::Const(_), Ast::Const(_)) = (&l, &r) {
        return fold_or(Ast::Binary(op, Box::new(l.clone()), Box::new(r.clone())), false);
    }
    match op {
        BinOp::Add if is_const(&l, 0.0) => r,
        BinOp::Add | BinOp::Sub if is_const(&r, 0.0) => l,
        BinOp::Sub if is_const(&l, 0.0) => simplify(&Ast::neg(r)),
        BinOp::Add if matches!(r, Ast::Neg(_)) => match r {
            Ast::Neg(inner) => Ast::sub(l, *inner),
            _ => unreachable!(),
        },
        BinOp::Mul if is_const(&l, 0.0) || is_const(&r, 0.0) => Ast::Const(0.0),
        BinOp::Mul if is_const(&l, 1.0) => r,
        BinOp::Mul | BinOp::Div if is_const(&r, 1.0) => l,
        BinOp::Div if is_const(&l, 0.0) && !is_const(&r, 0.0) => Ast::Const(0.0),
        BinOp::Mul if is_const(&l, -1.0) => simplify(&Ast::neg(r)),
        BinOp::Mul if is_const(&r, -1.0) => simplify(&Ast::neg(l)),
        _ => Ast::Binary(op, Box::new(l), Box::new(r)),
    }
}
