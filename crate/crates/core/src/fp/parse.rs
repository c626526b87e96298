//! Recursive-descent parser for the expression language:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? int)?
//! atom  := int | 't' | 'x' int | '(' expr ')'
//! ```

use num_bigint::BigUint;

use super::{Fp, FpPoly, FpRational, LaurentPoly};
use crate::error::{Error, Result};

/// Parses an element of F_p(t); `x` variables are rejected.
pub fn parse_rational(text: &str, field: Fp) -> Result<FpRational> {
    let v = Parser::new(text, field, 0).run()?;
    Ok(v.as_constant().expect("no variables in rational context"))
}

/// Parses a Laurent polynomial in x1..x`nvars` over F_p(t).
pub fn parse_laurent(text: &str, field: Fp, nvars: usize) -> Result<LaurentPoly> {
    Parser::new(text, field, nvars).run()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: Fp,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, field: Fp, nvars: usize) -> Self {
        Parser { src: text.as_bytes(), pos: 0, field, nvars }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
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

    fn run(mut self) -> Result<LaurentPoly> {
        let v = self.expr()?;
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?)?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.unary()?;
                acc = acc.div(&d).map_err(|e| match e {
                    Error::Invalid(msg) => Error::Syntax { pos: at, msg },
                    other => other,
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<LaurentPoly> {
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<LaurentPoly> {
        let (base, bare_var) = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let negative = self.eat(b'-');
        let at = self.pos;
        let e = self.uint()?;
        let e: i64 = match e.try_into() {
            Ok(e) => e,
            Err(_) => return Err(Error::Syntax { pos: at, msg: "exponent too large".into() }),
        };
        if negative {
            if !bare_var {
                return Err(Error::Syntax {
                    pos: at,
                    msg: "negative exponents are only allowed on x variables".into(),
                });
            }
            base.pow(-e)
        } else {
            base.pow(e)
        }
    }

    fn atom(&mut self) -> Result<(LaurentPoly, bool)> {
        let field = self.field;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok((v, false))
            }
            Some(b't') => {
                self.pos += 1;
                Ok((LaurentPoly::constant(FpRational::t(field), self.nvars), false))
            }
            Some(b'x') => {
                let start = self.pos;
                self.pos += 1;
                if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    return self.err("expected variable index after 'x'");
                }
                let idx = self.uint()?;
                let idx = usize::try_from(idx).unwrap_or(usize::MAX);
                if idx == 0 || idx > self.nvars {
                    self.pos = start;
                    return Err(Error::VariableOutOfRange { index: idx, n: self.nvars });
                }
                Ok((LaurentPoly::var(field, self.nvars, idx - 1), true))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigUint = digits.parse().unwrap();
                let c = FpRational::from_poly(FpPoly::constant(field, field.from_biguint(&n)));
                Ok((LaurentPoly::constant(c, self.nvars), false))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        digits.parse().or_else(|_| {
            self.pos = start;
            self.err("integer too large")
        })
    }
}
