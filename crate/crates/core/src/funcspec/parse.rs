//! Recursive-descent parser for the textual function grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 'x' | '(' expr ')'
//!         | ('exp' | 'cosh' | 'sinh' | 'sqrt') '(' expr ')'
//!         | 'pow' '(' expr ',' expr ')'
//! ```
//!
//! Exponents (`^` and the second argument of `pow`) must not depend on `x`.
//! Division is only accepted where the node set can express it: by a
//! constant, or as `pow(denominator, -1)`.

use super::expr::FuncExpr;
use crate::error::{Error, Result};

/// Parses a function of `x`, e.g. `exp(2*x) + 0.5*sinh(x)` or `pow(x, 2.5)`.
pub fn parse(src: &str) -> Result<FuncExpr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
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
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<FuncExpr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                terms.push(-self.term()?);
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            FuncExpr::sum(terms)
        })
    }

    fn term(&mut self) -> Result<FuncExpr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.unary()?;
                acc = acc * rhs;
            } else if self.eat(b'/') {
                let at = self.pos;
                let rhs = self.unary()?;
                acc = match constant_value(&rhs) {
                    Some(0.0) => {
                        return Err(Error::Parse {
                            pos: at,
                            msg: "division by zero".into(),
                        })
                    }
                    Some(c) => FuncExpr::scale(1.0 / c, acc),
                    None => acc * FuncExpr::pow(rhs, -1.0),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<FuncExpr> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<FuncExpr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = self.constant_arg()?;
            return Ok(FuncExpr::pow(base, exponent));
        }
        Ok(base)
    }

    fn constant_arg(&mut self) -> Result<f64> {
        let at = self.pos;
        let e = self.unary()?;
        constant_value(&e).ok_or(Error::Parse {
            pos: at,
            msg: "exponent must not depend on x".into(),
        })
    }

    fn atom(&mut self) -> Result<FuncExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number().map(FuncExpr::constant),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match ident {
                    "x" => Ok(FuncExpr::x()),
                    "exp" | "cosh" | "sinh" | "sqrt" => {
                        self.expect(b'(')?;
                        let arg = self.expr()?;
                        self.expect(b')')?;
                        Ok(match ident {
                            "exp" => FuncExpr::exp(arg),
                            "cosh" => FuncExpr::cosh(arg),
                            "sinh" => FuncExpr::sinh(arg),
                            _ => FuncExpr::pow(arg, 0.5),
                        })
                    }
                    "pow" => {
                        self.expect(b'(')?;
                        let base = self.expr()?;
                        self.expect(b',')?;
                        let at = self.pos;
                        let e = self.expr()?;
                        let exponent = constant_value(&e).ok_or(Error::Parse {
                            pos: at,
                            msg: "exponent must not depend on x".into(),
                        })?;
                        self.expect(b')')?;
                        Ok(FuncExpr::pow(base, exponent))
                    }
                    _ => Err(Error::Parse {
                        pos: start,
                        msg: format!("unknown identifier `{ident}`"),
                    }),
                }
            }
            Some(c) => Err(self.err(format!("unexpected character '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let s = self.src;
        let digits = |p: &mut usize| {
            while *p < s.len() && s[*p].is_ascii_digit() {
                *p += 1;
            }
        };
        digits(&mut self.pos);
        if self.pos < s.len() && s[self.pos] == b'.' {
            self.pos += 1;
            digits(&mut self.pos);
        }
        if self.pos < s.len() && (s[self.pos] == b'e' || s[self.pos] == b'E') {
            let mut q = self.pos + 1;
            if q < s.len() && (s[q] == b'+' || s[q] == b'-') {
                q += 1;
            }
            if q < s.len() && s[q].is_ascii_digit() {
                self.pos = q;
                digits(&mut self.pos);
            }
        }
        let text = std::str::from_utf8(&s[start..self.pos]).unwrap();
        text.parse::<f64>().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("malformed number `{text}`"),
        })
    }
}

fn constant_value(e: &FuncExpr) -> Option<f64> {
    if e.is_constant() {
        e.eval(0.0).ok()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(src: &str, x: f64) -> f64 {
        parse(src).unwrap().eval(x).unwrap()
    }

    #[test]
    fn grammar_examples() {
        assert!((at("cosh(1.0*x)", 0.3) - 0.3f64.cosh()).abs() < 1e-15);
        assert!((at("pow(x,2.5)", 2.0) - 2f64.powf(2.5)).abs() < 1e-14);
        let want = (2.0f64 * 0.7).exp() + 0.5 * 0.7f64.sinh();
        assert!((at("exp(2*x)+0.5*sinh(x)", 0.7) - want).abs() < 1e-14);
        assert!((at("cosh(1*(x-0.5))", 0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn precedence_and_unary_minus() {
        assert_eq!(at("1 + 2*3", 0.0), 7.0);
        assert_eq!(at("-x^2", 3.0), -9.0);
        assert_eq!(at("2^-1", 0.0), 0.5);
        assert_eq!(at("x/4", 2.0), 0.5);
        assert_eq!(at("1/x", 4.0), 0.25);
        assert_eq!(at("1e-2*x", 100.0), 1.0);
        assert_eq!(at("(x - 1)*(x + 1)", 3.0), 8.0);
        assert_eq!(at("sqrt(x)", 9.0), 3.0);
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "",
            "x +",
            "pow(x, x)",
            "foo(x)",
            "cosh x",
            "(x",
            "x)",
            "2^x",
            "1/0",
            "x $ 2",
        ] {
            assert!(matches!(parse(bad), Err(Error::Parse { .. })), "{bad:?} should fail");
        }
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "cosh(2*(x-0.3)) + 0.5*exp(-1.5*x)",
            "pow(x, 2.5) - 3*x",
            "1 + pow(x - 0.5, 2) + 0.25*cosh(1.2*(x - 0.5))",
            "exp(2*x)*sinh(x)/3",
            "1e-7*x + 1e20",
        ] {
            let f = parse(src).unwrap();
            let g = parse(&f.to_string()).unwrap_or_else(|e| panic!("{f}: {e}"));
            for t in [0.1, 0.7, 1.9] {
                assert_eq!(f.eval(t).unwrap(), g.eval(t).unwrap(), "{src} -> {f}");
            }
        }
    }
}
