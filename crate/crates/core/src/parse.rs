//! Text grammar shared by scalars and forms.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ['^' ['-'] int]
//! atom   := int | 's' | 't' | 'log(t)' | ident | 'e[' i,j,.. ']' | '(' expr ')'
//! ```
//!
//! `s` is √d, `t` the radial variable and `e[..]` a 1-based coframe monomial.
//! A product of two forms is their wedge product; division is only by units.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exterior::FormExpr;
use crate::scalar::{QuadNum, ScalarExpr};

#[derive(Clone, Debug)]
enum Value {
    Scalar(ScalarExpr),
    Form(FormExpr),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: Option<usize>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        s.parse().or_else(|_| self.err("integer out of range"))
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            if self.pos == start && self.src[self.pos].is_ascii_digit() {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn expr(&mut self) -> Result<Value> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let mut acc = self.term()?;
        if neg {
            acc = negate(acc);
        }
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                acc = self.add(acc, rhs)?;
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                acc = self.add(acc, negate(rhs))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn add(&self, a: Value, b: Value) -> Result<Value> {
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(&x + &y)),
            (Value::Form(x), Value::Form(y)) if x.degree() == y.degree() => Ok(Value::Form(x.add(&y))),
            (Value::Form(x), Value::Scalar(y)) | (Value::Scalar(y), Value::Form(x)) if x.degree() == 0 => {
                Ok(Value::Form(x.add(&FormExpr::scalar(x.dim(), y))))
            }
            _ => self.err("adding terms of different degree"),
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.factor()?;
                acc = match (acc, rhs) {
                    (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x * &y),
                    (Value::Scalar(x), Value::Form(f)) | (Value::Form(f), Value::Scalar(x)) => Value::Form(f.scale(&x)),
                    (Value::Form(f), Value::Form(g)) => match f.try_wedge(&g) {
                        Ok(w) => Value::Form(w),
                        Err(e) => return self.err(e.to_string()),
                    },
                };
            } else if self.eat(b'/') {
                let rhs = self.factor()?;
                let Value::Scalar(den) = rhs else {
                    return self.err("division by a form");
                };
                let inv = match den.inverse() {
                    Ok(i) => i,
                    Err(e) => return self.err(e.to_string()),
                };
                acc = match acc {
                    Value::Scalar(x) => Value::Scalar(&x * &inv),
                    Value::Form(f) => Value::Form(f.scale(&inv)),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let e = self.int()?;
            let Value::Scalar(b) = base else {
                return self.err("power of a form");
            };
            let e = if neg { -e } else { e };
            let p = if e >= 0 {
                b.pow(e as u32)
            } else {
                match b.inverse() {
                    Ok(i) => i.pow((-e) as u32),
                    Err(err) => return self.err(err.to_string()),
                }
            };
            return Ok(Value::Scalar(p));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Value> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(Value::Scalar(ScalarExpr::int(self.int()?))),
            Some(_) => {
                let Some(id) = self.ident() else {
                    return self.err("unexpected character");
                };
                match id.as_str() {
                    "s" => Ok(Value::Scalar(ScalarExpr::constant(QuadNum::sqrt_d()))),
                    "t" => Ok(Value::Scalar(ScalarExpr::t())),
                    "log" => {
                        self.expect(b'(')?;
                        if self.ident().as_deref() != Some("t") {
                            return self.err("only log(t) is supported");
                        }
                        self.expect(b')')?;
                        Ok(Value::Scalar(ScalarExpr::log_t()))
                    }
                    "e" if self.peek() == Some(b'[') => {
                        self.pos += 1;
                        let Some(n) = self.dim else {
                            return self.err("forms are not allowed here");
                        };
                        let mut idx = Vec::new();
                        if !self.eat(b']') {
                            loop {
                                let i = self.int()? as usize;
                                if i == 0 || i > n {
                                    return self.err(format!("index {i} outside 1..={n}"));
                                }
                                idx.push(i - 1);
                                if self.eat(b']') {
                                    break;
                                }
                                self.expect(b',')?;
                            }
                        }
                        Ok(Value::Form(FormExpr::basis(n, &idx)))
                    }
                    _ => Ok(Value::Scalar(ScalarExpr::param(&id))),
                }
            }
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return self.err("trailing input");
        }
        Ok(())
    }
}

fn negate(v: Value) -> Value {
    match v {
        Value::Scalar(x) => Value::Scalar(-x),
        Value::Form(f) => Value::Form(f.neg()),
    }
}

pub fn parse_scalar(src: &str) -> Result<ScalarExpr> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, dim: None };
    let v = p.expr()?;
    p.finish()?;
    match v {
        Value::Scalar(s) => Ok(s),
        Value::Form(_) => unreachable!("forms disabled"),
    }
}

/// Parse a form of the given degree on `n` labels. A bare `0` yields the zero form.
pub fn parse_form(src: &str, n: usize, degree: usize) -> Result<FormExpr> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, dim: Some(n) };
    let v = p.expr()?;
    p.finish()?;
    let f = match v {
        Value::Form(f) => f,
        Value::Scalar(s) if s.is_zero() => FormExpr::zero(n, degree),
        Value::Scalar(s) => FormExpr::scalar(n, s),
    };
    if f.degree() != degree && !f.is_zero() {
        return Err(Error::DegreeMismatch { expected: degree, got: f.degree() });
    }
    Ok(if f.is_zero() { FormExpr::zero(n, degree) } else { f })
}

impl FromStr for ScalarExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_scalar(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_grammar() {
        let x = parse_scalar("(-3/2 + 1/3*s)*t^-3*log(t)^2*g^1").unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(parse_scalar(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn forms() {
        let f = parse_form("2*t^-3 * e[1,4,5] - e[2,3,1]", 7, 3).unwrap();
        assert_eq!(f.comp(&[0, 1, 2]), ScalarExpr::int(-1));
        assert_eq!(parse_form(&f.to_string(), 7, 3).unwrap(), f);
        assert!(parse_form("e[1,2]", 7, 3).is_err());
        assert!(parse_form("0", 7, 2).unwrap().is_zero());
        assert!(parse_form("e[9]", 7, 1).is_err());
    }

    #[test]
    fn errors_carry_position() {
        assert!(matches!(parse_scalar("1 + "), Err(Error::Parse { .. })));
        assert!(matches!(parse_scalar("1/(1+t)"), Err(Error::Parse { .. })));
    }
}
