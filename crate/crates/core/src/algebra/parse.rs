//! Text grammar for elements of `F(t)`:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := integer | 't' | '(' expr ')'
//! ```
//!
//! Integers are mapped into the target field, so `1/2` is a fraction over
//! `Q` and a residue over `F_p`.

use num_bigint::BigInt;

use super::scalar::{Field, FieldScalar};
use super::RationalFunction;
use crate::error::{Error, Result};

pub fn parse_rational_function(src: &str, field: Field) -> Result<RationalFunction> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, field };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

/// Parses a constant expression such as `-3/4` into a field element.
pub fn parse_scalar(src: &str, field: Field) -> Result<FieldScalar> {
    parse_rational_function(src, field)?
        .as_constant()
        .ok_or_else(|| Error::Parse { pos: 0, msg: format!("'{src}' is not a constant") })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: Field,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == b'*' {
                &acc * &rhs
            } else {
                acc.div(&rhs).map_err(|_| Error::Parse { pos: at, msg: "division by zero".into() })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction> {
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

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.pos;
        let n = self.integer()?;
        let k: i64 = i64::try_from(&n)
            .ok()
            .filter(|k| *k <= 10_000)
            .ok_or_else(|| Error::Parse { pos: at, msg: "exponent too large".into() })?;
        base.pow(if negative { -k } else { k })
            .map_err(|_| Error::Parse { pos: at, msg: "negative power of zero".into() })
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(b't') => {
                self.pos += 1;
                Ok(RationalFunction::t_pow(self.field, 1))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RationalFunction::constant(self.field.from_bigint(&n)))
            }
            Some(_) => Err(self.error("expected integer, 't' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;

    #[test]
    fn parses_spec_example() {
        let f = parse_rational_function("(t^2+1)/(t^3 - 2)", Field::Rationals).unwrap();
        assert_eq!(f.numer(), &Polynomial::from_i64s(Field::Rationals, &[1, 0, 1]));
        assert_eq!(f.denom(), &Polynomial::from_i64s(Field::Rationals, &[-2, 0, 0, 1]));
    }

    #[test]
    fn prime_field_residues() {
        let f5 = Field::prime(5).unwrap();
        let f = parse_rational_function("7*t - 1/2", f5).unwrap();
        // 7 = 2, 1/2 = 3 in F_5
        assert_eq!(f, parse_rational_function("2*t + 2", f5).unwrap());
    }

    #[test]
    fn negative_exponents() {
        let f = parse_rational_function("t^-2 + t", Field::Rationals).unwrap();
        assert_eq!(f.denom(), &Polynomial::from_i64s(Field::Rationals, &[0, 0, 1]));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_rational_function("t + * 2", Field::Rationals) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(parse_rational_function("(t", Field::Rationals), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_rational_function("1/(t-t)", Field::Rationals), Err(Error::Parse { pos: 1, .. })));
        assert!(parse_rational_function("t)", Field::Rationals).is_err());
    }

    #[test]
    fn scalar_parse() {
        assert_eq!(parse_scalar("-3/4", Field::Rationals).unwrap(), Field::Rationals.from_ratio(-3, 4).unwrap());
        assert!(parse_scalar("t", Field::Rationals).is_err());
    }
}
