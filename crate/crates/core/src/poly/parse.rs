//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*      // '/' only by a nonzero constant
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' uint)?
//! atom   := number | variable | '(' expr ')'
//! number := digits ('.' digits)?  |  digits ',' digits
//! ```
//!
//! Implicit multiplication (`2x`, `x y`, `(x)(y)`) is rejected. Decimal
//! literals are read exactly, so `0.01` is `1/100`; a decimal comma is
//! accepted for transcribed inputs like `0,01`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{PolyError, Polynomial, Rational, Ring};

pub fn parse_polynomial(text: &str, ring: &Arc<Ring>) -> Result<Polynomial, PolyError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.syntax("unexpected input"));
    }
    Ok(p)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<Ring>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, msg: &str) -> PolyError {
        PolyError::SyntaxError {
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc += &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc += &(-&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.unary()?;
                    acc = &acc * &f;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let f = self.unary()?;
                    match f.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        _ => {
                            return Err(PolyError::SyntaxError {
                                position: at,
                                message: "division is only allowed by a nonzero constant".into(),
                            })
                        }
                    }
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' || c == b'_' => {
                    return Err(self.syntax("implicit multiplication is not allowed; use `*`"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek() {
            Some(b'-') => return Err(PolyError::NegativeExponent),
            Some(c) if c.is_ascii_digit() => {}
            _ => return Err(self.syntax("expected a non-negative integer exponent")),
        }
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let e: u32 = digits.parse().map_err(|_| PolyError::SyntaxError {
            position: start,
            message: "exponent too large".into(),
        })?;
        if self.peek() == Some(b'^') {
            return Err(self.syntax("chained exponents are ambiguous; add parentheses"));
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii name");
                let idx = self
                    .ring
                    .index_of(name)
                    .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
                Ok(Polynomial::var(self.ring, idx))
            }
            Some(_) => Err(self.syntax("unexpected character")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Polynomial, PolyError> {
        let start = self.pos;
        let int_part = self.digits();
        let mut frac_part = String::new();
        if let Some(&sep) = self.src.get(self.pos) {
            // a decimal comma must be followed by a digit
            let next_is_digit = self
                .src
                .get(self.pos + 1)
                .is_some_and(|c| c.is_ascii_digit());
            if sep == b'.' || (sep == b',' && next_is_digit) {
                self.pos += 1;
                frac_part = self.digits();
                if frac_part.is_empty() {
                    return Err(self.syntax("expected digits after decimal point"));
                }
            }
        }
        if int_part.is_empty() && frac_part.is_empty() {
            self.pos = start;
            return Err(self.syntax("malformed number"));
        }
        let mut numer: BigInt = if int_part.is_empty() {
            BigInt::zero()
        } else {
            int_part.parse().expect("digits")
        };
        let mut denom = BigInt::one();
        for d in frac_part.bytes() {
            numer = numer * 10 + BigInt::from(d - b'0');
            denom *= 10;
        }
        Ok(Polynomial::constant(self.ring, Rational::new(numer, denom)))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn sphere() {
        let ring = Ring::new(&["x", "y", "z"]);
        let p = parse_polynomial("x^2+y^2+z^2-1", &ring).unwrap();
        assert_eq!(p.len(), 4);
        for (e, c) in [([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], 1), ([0, 0, 0], -1)] {
            assert_eq!(p.coefficient(&Monomial::from_exponents(&e)), r(c, 1));
        }
    }

    #[test]
    fn binomial_identity() {
        let ring = Ring::new(&["x", "y"]);
        let p = parse_polynomial("(x+y)^2 - x^2 - 2*x*y", &ring).unwrap();
        assert_eq!(p, Polynomial::var(&ring, 1).pow(2));
    }

    #[test]
    fn decimal_constants_are_exact() {
        let ring = Ring::new(&["x", "y", "z"]);
        let p = parse_polynomial("(x*(x-1)^2*(x-2)+y^2)^2+z^2-0.01", &ring).unwrap();
        assert_eq!(p.coefficient(&Monomial::one(3)), r(-1, 100));
        let q = parse_polynomial("(x*(x-1)^2*(x-2)+y^2)^2+z^2-0,01", &ring).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.total_degree(), Some(8));
    }

    #[test]
    fn errors() {
        let ring = Ring::new(&["x", "y"]);
        assert_eq!(
            parse_polynomial("x + w", &ring),
            Err(PolyError::UnknownVariable("w".into()))
        );
        assert_eq!(parse_polynomial("x^-2", &ring), Err(PolyError::NegativeExponent));
        match parse_polynomial("2x", &ring) {
            Err(PolyError::SyntaxError { position, .. }) => assert_eq!(position, 1),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(
            parse_polynomial("(x+1", &ring),
            Err(PolyError::SyntaxError { position: 4, .. })
        ));
        assert!(matches!(parse_polynomial("x*/y", &ring), Err(PolyError::SyntaxError { .. })));
        assert!(matches!(parse_polynomial("x/y", &ring), Err(PolyError::SyntaxError { .. })));
        assert!(matches!(parse_polynomial("", &ring), Err(PolyError::SyntaxError { .. })));
    }

    #[test]
    fn division_by_constant() {
        let ring = Ring::new(&["x"]);
        let p = parse_polynomial("3/4*x - 1/2", &ring).unwrap();
        assert_eq!(p.to_string(), "3/4*x - 1/2");
    }
}
