use num_bigint::BigInt;
use num_traits::One;

use super::{Monomial, PolyError, Polynomial, Rational};

/// Parses the polynomial text grammar
///
/// ```text
/// poly   := term (("+"|"-") term)* | "0"
/// term   := coeff ("*" factor)* | factor ("*" factor)*
/// factor := "x" index ("^" posint)?
/// coeff  := int | int "/" posint
/// ```
///
/// Whitespace is ignored and a leading sign is accepted on the first term.
/// Error positions are byte offsets into `text`.
pub fn parse_polynomial(text: &str, num_vars: usize) -> Result<Polynomial, PolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        num_vars,
    };
    p.poly()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    num_vars: usize,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            position: self.pos,
            message: message.into(),
        })
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

    fn digits(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digit string"))
    }

    fn poly(&mut self) -> Result<Polynomial, PolyError> {
        let mut out = Polynomial::zero(self.num_vars);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            None => return self.err("empty polynomial"),
            _ => 1,
        };
        loop {
            let (m, c) = self.term()?;
            let c = if sign < 0 { -c } else { c };
            out = out + Polynomial::monomial(self.num_vars, m, c);
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                Some(c) => return self.err(format!("unexpected character '{}'", c as char)),
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, Rational), PolyError> {
        let mut exps = vec![0u32; self.num_vars];
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.digits()?;
                    if den == BigInt::from(0) {
                        return self.err("zero denominator");
                    }
                    Rational::new(num, den)
                } else {
                    Rational::from_integer(num)
                }
            }
            Some(b'x') => {
                self.factor(&mut exps)?;
                Rational::one()
            }
            Some(c) => return self.err(format!("unexpected character '{}'", c as char)),
            None => return self.err("expected term"),
        };
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.factor(&mut exps)?;
        }
        Ok((exps, coeff))
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<(), PolyError> {
        if self.peek() != Some(b'x') {
            return self.err("expected variable 'x<index>'");
        }
        self.pos += 1;
        let at = self.pos;
        let idx = self.digits()?;
        let idx: usize = match idx.try_into() {
            Ok(i) => i,
            Err(_) => return self.err("variable index too large"),
        };
        if idx >= self.num_vars {
            return Err(PolyError::Syntax {
                position: at,
                message: format!("variable x{idx} out of range for {} variables", self.num_vars),
            });
        }
        let mut e = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.digits()?;
            e = match k.try_into() {
                Ok(k) if k > 0 => k,
                _ => return self.err("exponent must be a positive integer"),
            };
        }
        exps[idx] += e;
        Ok(())
    }
}
