//! Polynomial text: `c`, `c*x^i`, `c*x^i*y^j`, `x`, `y` joined by `+`/`-`,
//! with integer or `p/q` coefficients. Whitespace is insignificant.
//!
//! ```
//! use curveseg::text::parse_polynomial;
//! let g = parse_polynomial("y^2 - x^3 - x^2").unwrap();
//! assert_eq!(g.to_string(), "-x^3 - x^2 + y^2");
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{BivarPoly, Rational};

/// Malformed polynomial text. `position` is a byte offset into the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Largest exponent accepted, to keep dense storage bounded.
pub const MAX_EXPONENT: usize = 1000;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
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

    fn error(&self, expected: &str) -> ParseError {
        let found = match self.src.get(self.pos) {
            None => "end of input".to_string(),
            Some(&c) if c.is_ascii_graphic() => format!("'{}'", c as char),
            Some(&c) => format!("byte 0x{c:02x}"),
        };
        ParseError {
            position: self.pos,
            message: format!("expected {expected}, found {found}"),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("a digit"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("nonempty digit string"))
    }

    fn exponent(&mut self) -> Result<usize, ParseError> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let e = self.integer()?;
        usize::try_from(&e)
            .ok()
            .filter(|e| *e <= MAX_EXPONENT)
            .ok_or(ParseError {
                position: at,
                message: format!("exponent {e} exceeds {MAX_EXPONENT}"),
            })
    }

    /// `factor ('*' factor)*`, returning the coefficient and exponents.
    fn term(&mut self) -> Result<(Rational, usize, usize), ParseError> {
        let mut coeff = Rational::one();
        let (mut i, mut j) = (0usize, 0usize);
        loop {
            match self.peek() {
                Some(b'x') => {
                    self.pos += 1;
                    i += self.exponent()?;
                }
                Some(b'y') => {
                    self.pos += 1;
                    j += self.exponent()?;
                }
                Some(c) if c.is_ascii_digit() => {
                    let num = self.integer()?;
                    let den = if self.peek() == Some(b'/') {
                        self.pos += 1;
                        self.skip_ws();
                        let at = self.pos;
                        let d = self.integer()?;
                        if d.is_zero() {
                            return Err(ParseError {
                                position: at,
                                message: "zero denominator".into(),
                            });
                        }
                        d
                    } else {
                        BigInt::one()
                    };
                    coeff *= Rational::new(num, den);
                }
                _ => return Err(self.error("a coefficient, 'x' or 'y'")),
            }
            if i > MAX_EXPONENT || j > MAX_EXPONENT {
                return Err(ParseError {
                    position: self.pos,
                    message: format!("degree exceeds {MAX_EXPONENT}"),
                });
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((coeff, i, j));
            }
        }
    }

    fn polynomial(&mut self) -> Result<BivarPoly, ParseError> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -Rational::one()
            }
            Some(b'+') => {
                self.pos += 1;
                Rational::one()
            }
            _ => Rational::one(),
        };
        loop {
            let (c, i, j) = self.term()?;
            terms.push((i, j, sign * c));
            sign = match self.peek() {
                None => break,
                Some(b'+') => Rational::one(),
                Some(b'-') => -Rational::one(),
                Some(_) => return Err(self.error("'+', '-', '*' or end of input")),
            };
            self.pos += 1;
        }
        Ok(BivarPoly::from_terms(terms))
    }
}

/// Parses polynomial text into exact rational coefficients. The result does
/// not depend on the order of the terms.
pub fn parse_polynomial(text: &str) -> Result<BivarPoly, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    if p.peek().is_none() {
        return Err(p.error("a polynomial"));
    }
    p.polynomial()
}

/// Canonical text, accepted back by [`parse_polynomial`].
pub fn canonical_text(g: &BivarPoly) -> String {
    g.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let g = parse_polynomial("y^2 - x^3 - x^2").unwrap();
        assert_eq!(g, BivarPoly::from_ints(&[(0, 2, 1), (3, 0, -1), (2, 0, -1)]));
        let g = parse_polynomial("3*x^4 + 5*x^2*y^2 + 2*y^4 - 4*y^2").unwrap();
        assert_eq!(g.coeff(2, 2), rat(5));
        assert_eq!(g.total_degree(), 4);
        let g = parse_polynomial("1/2*y - x").unwrap();
        assert_eq!(g.coeff(0, 1), ratio(1, 2));
        assert_eq!(g.coeff(1, 0), rat(-1));
    }

    #[test]
    fn term_order_and_spacing_do_not_matter() {
        let a = parse_polynomial("x^2+y^2-1").unwrap();
        let b = parse_polynomial("  - 1 + y ^ 2 +x^2 ").unwrap();
        let c = parse_polynomial("y*y + x*x - 1").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(parse_polynomial("x - x").unwrap(), BivarPoly::zero());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_polynomial("x^2 + + y").unwrap_err();
        assert_eq!(e.position, 6);
        let e = parse_polynomial("").unwrap_err();
        assert_eq!(e.position, 0);
        let e = parse_polynomial("3/0*x").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(e.message.contains("zero denominator"));
        assert!(parse_polynomial("x^").is_err());
        assert!(parse_polynomial("z").is_err());
        assert!(parse_polynomial("x y").is_err());
        assert!(parse_polynomial("x^99999999999999999999").is_err());
        let e = parse_polynomial("2 x").unwrap_err();
        assert!(e.message.contains("expected"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn canonical_text_round_trips(g in crate::algebra::bivar::tests::arb_poly(5)) {
            prop_assert_eq!(parse_polynomial(&canonical_text(&g)).unwrap(), g);
        }

        #[test]
        fn arbitrary_text_never_panics(s in "[-+*/^0-9xy ]{0,24}") {
            let _ = parse_polynomial(&s);
        }

        #[test]
        fn arbitrary_unicode_never_panics(s in "\\PC{0,16}") {
            let _ = parse_polynomial(&s);
        }
    }
}
