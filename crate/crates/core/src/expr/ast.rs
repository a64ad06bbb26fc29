use std::fmt;

/// Elementary functions accepted in call position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Tan,
    Arctan,
    Sqrt,
    Ln,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Exp,
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Arctan,
        Func::Sqrt,
        Func::Ln,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Arctan => "arctan",
            Func::Sqrt => "sqrt",
            Func::Ln => "ln",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

/// Expression tree over the single variable `x` and named parameters.
///
/// Powers only take integer exponents, which keeps [`differentiate`]
/// closed over the grammar and free of branch cuts.
///
/// [`differentiate`]: super::differentiate
#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Const(f64),
    Var,
    Param(String),
    Neg(Box<Ast>),
    Binary(BinOp, Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i32),
    Call(Func, Box<Ast>),
}

impl Ast {
    pub fn constant(value: f64) -> Ast {
        Ast::Const(value)
    }

    pub fn param(name: impl Into<String>) -> Ast {
        Ast::Param(name.into())
    }

    pub fn neg(a: Ast) -> Ast {
        Ast::Neg(Box::new(a))
    }

    pub fn add(a: Ast, b: Ast) -> Ast {
        Ast::Binary(BinOp::Add, Box::new(a), Box::new(b))
    }

    pub fn sub(a: Ast, b: Ast) -> Ast {
        Ast::Binary(BinOp::Sub, Box::new(a), Box::new(b))
    }

    pub fn mul(a: Ast, b: Ast) -> Ast {
        Ast::Binary(BinOp::Mul, Box::new(a), Box::new(b))
    }

    pub fn div(a: Ast, b: Ast) -> Ast {
        Ast::Binary(BinOp::Div, Box::new(a), Box::new(b))
    }

    pub fn pow(a: Ast, exponent: i32) -> Ast {
        Ast::Pow(Box::new(a), exponent)
    }

    pub fn call(f: Func, a: Ast) -> Ast {
        Ast::Call(f, Box::new(a))
    }

    /// True when the tree does not reference `x`.
    pub fn is_independent_of_x(&self) -> bool {
        match self {
            Ast::Const(_) | Ast::Param(_) => true,
            Ast::Var => false,
            Ast::Neg(a) | Ast::Pow(a, _) | Ast::Call(_, a) => a.is_independent_of_x(),
            Ast::Binary(_, a, b) => a.is_independent_of_x() && b.is_independent_of_x(),
        }
    }

    /// Names of all parameters referenced, sorted and deduplicated.
    pub fn parameters(&self) -> Vec<String> {
        fn walk(a: &Ast, out: &mut Vec<String>) {
            match a {
                Ast::Param(p) => out.push(p.clone()),
                Ast::Const(_) | Ast::Var => {}
                Ast::Neg(a) | Ast::Pow(a, _) | Ast::Call(_, a) => walk(a, out),
                Ast::Binary(_, a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Replace every `x` by `with`.
    pub fn substitute(&self, with: &Ast) -> Ast {
        match self {
            Ast::Var => with.clone(),
            Ast::Const(_) | Ast::Param(_) => self.clone(),
            Ast::Neg(a) => Ast::Neg(Box::new(a.substitute(with))),
            Ast::Pow(a, k) => Ast::Pow(Box::new(a.substitute(with)), *k),
            Ast::Call(f, a) => Ast::Call(*f, Box::new(a.substitute(with))),
            Ast::Binary(op, a, b) => Ast::Binary(*op, Box::new(a.substitute(with)), Box::new(b.substitute(with))),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Ast::Const(_) | Ast::Var | Ast::Param(_) => 1,
            Ast::Neg(a) | Ast::Pow(a, _) | Ast::Call(_, a) => 1 + a.node_count(),
            Ast::Binary(_, a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    // Binding strength used by the printer; mirrors the parser's levels.
    fn precedence(&self) -> u8 {
        match self {
            Ast::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Ast::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Ast::Neg(_) => 3,
            Ast::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, a: &Ast, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({a})")
    } else {
        write!(f, "{a}")
    }
}

/// Prints in the accepted grammar so that parsing the output rebuilds the
/// same tree (negative constants excepted, the parser never produces them).
impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ast::Const(c) => {
                if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) {
                    write!(f, "({c})")
                } else {
                    write!(f, "{c}")
                }
            }
            Ast::Var => f.write_str("x"),
            Ast::Param(p) => f.write_str(p),
            Ast::Neg(a) => {
                f.write_str("-")?;
                // `-a*b` reparses as -(a*b), so products may follow bare.
                write_wrapped(f, a, a.precedence() < 2)
            }
            Ast::Binary(op, a, b) => {
                let p = self.precedence();
                // A leading negation would swallow the whole product.
                let wrap_left = a.precedence() < p || matches!(**a, Ast::Neg(_));
                let wrap_right = match op {
                    BinOp::Add | BinOp::Mul => b.precedence() < p,
                    BinOp::Sub | BinOp::Div => b.precedence() <= p,
                } || (p == 2 && matches!(**b, Ast::Neg(_)));
                write_wrapped(f, a, wrap_left)?;
                write!(f, "{}", op.symbol())?;
                write_wrapped(f, b, wrap_right)
            }
            Ast::Pow(a, n) => {
                write_wrapped(f, a, a.precedence() <= 4)?;
                write!(f, "^{n}")
            }
            Ast::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
