use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{MPoly, PolyError, Rat, RingSpec};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(text[start..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(PolyError::Syntax { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ring: &'a Arc<RingSpec>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Syntax { pos: self.offset(), msg: msg.into() }
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let at = self.offset();
                let d = self.unary()?;
                match d.as_constant() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                    Some(_) => return Err(PolyError::Syntax { pos: at, msg: "division by zero".into() }),
                    None => {
                        return Err(PolyError::Syntax {
                            pos: at,
                            msg: "division is only allowed by constants".into(),
                        })
                    }
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly, PolyError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<MPoly, PolyError> {
        let base = self.atom()?;
        if self.eat('^') {
            if self.peek() == Some(&Tok::Op('-')) {
                return Err(PolyError::NegativeExponent);
            }
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly, PolyError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(MPoly::constant(self.ring, Rat::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let v = self
                    .ring
                    .var_index(&name)
                    .ok_or(PolyError::UnknownVariable(name))?;
                Ok(MPoly::var(self.ring, v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(_) => Err(self.err("expected a number, variable or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses and expands a polynomial expression over the ring's variables.
///
/// Grammar: integer literals, identifiers, `+ - * / ^` and parentheses.
/// Division is accepted only by nonzero constants, so `3/4*u` is a rational
/// coefficient.
pub fn parse_poly(text: &str, ring: &Arc<RingSpec>) -> Result<MPoly, PolyError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(PolyError::Syntax { pos: 0, msg: "empty expression".into() });
    }
    let mut parser = Parser { toks, pos: 0, end: text.len(), ring };
    let p = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(parser.err("trailing input"));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<RingSpec> {
        RingSpec::with_default_pairs(&["u", "v", "w"]).unwrap()
    }

    #[test]
    fn parses_bilinear_form() {
        let p = parse_poly("x0*v - y0*u", &ring()).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.to_string(), "-u*y0 + v*x0");
    }

    #[test]
    fn zero_and_cancellation() {
        assert!(parse_poly("0", &ring()).unwrap().is_zero());
        let p = parse_poly("(u+v)^2 - u^2 - 2*u*v", &ring()).unwrap();
        assert_eq!(p, parse_poly("v^2", &ring()).unwrap());
    }

    #[test]
    fn rational_literals() {
        let p = parse_poly("1/2*u + 3/4", &ring()).unwrap();
        assert_eq!(p.to_string(), "1/2*u + 3/4");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_poly("u + z", &ring()), Err(PolyError::UnknownVariable(v)) if v == "z"));
        assert!(matches!(parse_poly("u^-1", &ring()), Err(PolyError::NegativeExponent)));
        assert!(matches!(parse_poly("u + * v", &ring()), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("(u + v", &ring()), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("u / v", &ring()), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("", &ring()), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn display_round_trips() {
        let p = parse_poly("-3/7*u^2*x1 + 4*v*w*y2 - 11", &ring()).unwrap();
        assert_eq!(parse_poly(&p.to_string(), &ring()).unwrap(), p);
    }
}
