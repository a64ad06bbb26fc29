//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := '-' term | factor (('*'|'/') factor)*
//! factor := '-' factor | base ('^' ['-'] integer)?
//! base   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! `x` is the variable, `pi` a constant, any other identifier must be a
//! declared parameter. Error offsets are 1-based byte positions.

use super::ast::{Ast, Func};
use super::ExprError;

pub fn parse<S: AsRef<str>>(text: &str, params: &[S]) -> Result<Ast, ExprError> {
    if text.trim().is_empty() {
        return Err(ExprError::Empty);
    }
    if let Some(offset) = text.bytes().position(|b| !b.is_ascii()) {
        return Err(ExprError::Syntax {
            offset: offset + 1,
            message: "non-ASCII input".into(),
        });
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        params: params.iter().map(|s| s.as_ref()).collect(),
    };
    let ast = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(ast)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    params: Vec<&'a str>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn syntax(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            offset: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Ast, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Ast::add(lhs, self.term()?);
            } else if self.eat(b'-') {
                lhs = Ast::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ExprError> {
        if self.eat(b'-') {
            return Ok(Ast::neg(self.term()?));
        }
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Ast::mul(lhs, self.factor()?);
            } else if self.eat(b'/') {
                lhs = Ast::div(lhs, self.factor()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Ast, ExprError> {
        if self.eat(b'-') {
            return Ok(Ast::neg(self.factor()?));
        }
        let base = self.base()?;
        if self.eat(b'^') {
            let exponent = self.integer_exponent()?;
            return Ok(Ast::pow(base, exponent));
        }
        Ok(base)
    }

    fn integer_exponent(&mut self) -> Result<i32, ExprError> {
        let parenthesized = self.eat(b'(');
        let negative = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("exponent must be an integer literal"));
        }
        if matches!(self.src.get(self.pos), Some(b'.' | b'e' | b'E')) {
            return Err(self.syntax("exponent must be an integer literal"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let value: i32 = digits.parse().map_err(|_| ExprError::Syntax {
            offset: start + 1,
            message: "exponent out of range".into(),
        })?;
        if parenthesized {
            self.expect(b')')?;
        }
        Ok(if negative { -value } else { value })
    }

    fn base(&mut self) -> Result<Ast, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(_) => Err(self.syntax("expected a number, identifier or '('")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Ast, ExprError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut count = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            self.pos = start;
            return Err(self.syntax("malformed number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = mark;
                return Err(self.syntax("malformed exponent in number"));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let value: f64 = text.parse().map_err(|_| ExprError::Syntax {
            offset: start + 1,
            message: "malformed number".into(),
        })?;
        if !value.is_finite() {
            return Err(ExprError::Syntax {
                offset: start + 1,
                message: "number out of range".into(),
            });
        }
        Ok(Ast::Const(value))
    }

    fn identifier(&mut self) -> Result<Ast, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if self.peek() == Some(b'(') {
            let func = Func::from_name(name).ok_or_else(|| ExprError::UnknownFunction {
                name: name.to_string(),
                offset: start + 1,
            })?;
            self.pos += 1;
            let arg = self.expr()?;
            self.expect(b')')?;
            return Ok(Ast::call(func, arg));
        }
        if name == "x" {
            Ok(Ast::Var)
        } else if self.params.contains(&name) {
            Ok(Ast::Param(name.to_string()))
        } else if name == "pi" {
            Ok(Ast::Const(std::f64::consts::PI))
        } else {
            Err(ExprError::UnknownIdentifier {
                name: name.to_string(),
                offset: start + 1,
            })
        }
    }
}
