//! Text format for elements.
//!
//! Grammar (whitespace insignificant between tokens):
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := [coef '*'] gen | coef
//! coef   := int | int '/' posint
//! gen    := 'd[' int ']' | 'h[' int ']' | 'c' | 'l'
//! ```
//!
//! `h[k]` denotes h_{k+1/2}. `format_element` emits terms in canonical
//! order (d's, h's, c, l; indices ascending) with reduced coefficients, so
//! `parse_element(format_element(x)) == x` for every element.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{BasisVector, Element};
use crate::rational::Rational;

/// A parse failure with its byte offset and the tokens that were legal there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at offset {}: expected {}, found {}",
            self.pos,
            self.expected.join(" | "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(ch) = self.peek() {
            if ch.is_whitespace() {
                self.pos += ch.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let ch = self.peek()?;
        self.pos += ch.len_utf8();
        Some(ch)
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(ch) => format!("'{ch}'"),
            None => "end of input".to_owned(),
        }
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            pos: self.pos,
            expected: expected.to_vec(),
            found: self.found(),
        }
    }

    fn expect(&mut self, ch: char, name: &'static str) -> Result<(), ParseError> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(ch) if ch.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return Err(self.error(&["digit"]));
        }
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        let neg = self.eat('-');
        let mag = self.digits()?;
        Ok(if neg { -mag } else { mag })
    }

    fn index(&mut self) -> Result<i64, ParseError> {
        let pos = self.pos;
        let val = self.int()?;
        i64::try_from(&val).map_err(|_| ParseError {
            pos,
            expected: vec!["basis index fitting in 64 bits"],
            found: val.to_string(),
        })
    }

    fn coef(&mut self) -> Result<Rational, ParseError> {
        let numer = self.int()?;
        self.skip_ws();
        if self.eat('/') {
            self.skip_ws();
            let pos = self.pos;
            let denom = self.digits()?;
            if denom.is_zero() {
                return Err(ParseError {
                    pos,
                    expected: vec!["positive integer"],
                    found: "0".to_owned(),
                });
            }
            Ok(Rational::from_big(numer, denom))
        } else {
            Ok(Rational::from_big(numer, BigInt::from(1)))
        }
    }

    fn gen(&mut self) -> Result<BasisVector, ParseError> {
        const EXPECTED: &[&str] = &["'d['", "'h['", "'c'", "'l'"];
        match self.peek() {
            Some('c') => {
                self.bump();
                Ok(BasisVector::C)
            }
            Some('l') => {
                self.bump();
                Ok(BasisVector::L)
            }
            Some(tag @ ('d' | 'h')) => {
                self.bump();
                self.skip_ws();
                self.expect('[', "'['")?;
                self.skip_ws();
                let idx = self.index()?;
                self.skip_ws();
                self.expect(']', "']'")?;
                Ok(match tag {
                    'd' => BasisVector::D(idx),
                    _ => BasisVector::H(idx),
                })
            }
            _ => Err(self.error(EXPECTED)),
        }
    }

    fn term(&mut self) -> Result<Element, ParseError> {
        const EXPECTED: &[&str] = &["number", "'d['", "'h['", "'c'", "'l'"];
        match self.peek() {
            Some(ch) if ch.is_ascii_digit() || ch == '-' => {
                let coef_pos = self.pos;
                let coef = self.coef()?;
                self.skip_ws();
                if self.eat('*') {
                    self.skip_ws();
                    let bv = self.gen()?;
                    Ok(Element::term(bv, coef))
                } else if coef.is_zero() {
                    Ok(Element::zero())
                } else {
                    // The algebra has no scalar unit, so a bare nonzero
                    // number denotes nothing.
                    Err(ParseError {
                        pos: coef_pos,
                        expected: vec!["'*' after a nonzero coefficient", "the literal 0"],
                        found: coef.to_string(),
                    })
                }
            }
            Some('d' | 'h' | 'c' | 'l') => {
                let bv = self.gen()?;
                Ok(Element::basis(bv))
            }
            _ => Err(self.error(EXPECTED)),
        }
    }
}

pub fn parse_element(text: &str) -> Result<Element, ParseError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    let negate = cur.eat('-');
    cur.skip_ws();
    let first = cur.term()?;
    let mut acc = if negate { first.neg() } else { first };
    loop {
        cur.skip_ws();
        match cur.peek() {
            Some('+') => {
                cur.bump();
                cur.skip_ws();
                acc = acc.add(&cur.term()?);
            }
            Some('-') => {
                cur.bump();
                cur.skip_ws();
                acc = acc.sub(&cur.term()?);
            }
            None => break,
            Some(_) => return Err(cur.error(&["'+'", "'-'", "end of input"])),
        }
    }
    Ok(acc)
}

pub fn format_element(x: &Element) -> String {
    if x.is_zero() {
        return "0".to_owned();
    }
    let mut out = String::new();
    for (i, (bv, coef)) in x.iter().enumerate() {
        let mag = coef.abs();
        if i == 0 {
            if coef.is_negative() {
                out.push('-');
            }
        } else if coef.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if mag.is_one() {
            out.push_str(&bv.key());
        } else {
            out.push_str(&format!("{}*{}", mag, bv.key()));
        }
    }
    out
}
