//! Recursive-descent parser for the polynomial text grammar.
//!
//! ```text
//! poly   := sign? term (('+' | '-') term)*
//! term   := factor ('*'? factor)*
//! factor := atom ('^' uint)?
//! atom   := uint | var | '(' poly ')'
//! var    := [A-Za-z][A-Za-z0-9_]*
//! ```
//!
//! Whitespace is insignificant. Juxtaposition is multiplication, so `3x0`
//! and `2 x1 x2` both parse.

use super::{Poly, PolyError, PrimeChar};

pub(crate) fn parse(text: &str, names: &[String], char: PrimeChar) -> Result<Poly, PolyError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        names,
        char,
    };
    let poly = parser.poly()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(poly)
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
    char: PrimeChar,
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

    fn syntax(&self, message: &str) -> PolyError {
        PolyError::Syntax {
            message: message.to_string(),
            offset: self.pos,
        }
    }

    fn poly(&mut self) -> Result<Poly, PolyError> {
        let negate_first = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate_first { -&first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(b'-') => return Err(PolyError::NegativeExponent { offset: self.pos }),
                Some(c) if c.is_ascii_digit() => {}
                _ => return Err(self.syntax("expected exponent after '^'")),
            }
            let start = self.pos;
            let digits = self.digits();
            let e: u32 = digits.parse().map_err(|_| PolyError::Syntax {
                message: "exponent too large".to_string(),
                offset: start,
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits")
    }

    fn atom(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.poly()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = self.char.get() as u64;
                let value = self
                    .digits()
                    .bytes()
                    .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(Poly::constant(value as i64, self.char, self.names.len()))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident");
                match self.names.iter().position(|n| n == name) {
                    Some(i) => Ok(Poly::var(i, self.char, self.names.len())),
                    None => Err(PolyError::UnknownVariable {
                        name: name.to_string(),
                        offset: start,
                    }),
                }
            }
            Some(_) => Err(self.syntax("expected a number, variable or '('")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}
