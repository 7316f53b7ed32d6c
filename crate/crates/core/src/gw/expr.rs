//! Text syntax for GW elements.
//!
//! ```text
//! expr   := [+|-] term (('+' | '-') term)*
//! term   := power ('*'? power)*
//! power  := atom ('^' integer)?
//! atom   := integer | '<' items '>' | '⟨' items '⟩' | 'h' | 'e' | 'eps' | '(' expr ')'
//! items  := item (',' item)*        -- <a, b> means <a> + <b>
//! item   := rational | 'ns' | '+' | '-'
//! ```

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{GWElement, GwError};
use crate::field::{normalize_square_class, Field, FpClass, RealClass, SquareClass};

pub fn parse_gw(field: Field, src: &str) -> Result<GWElement, GwError> {
    let mut p = Parser { chars: src.chars().collect(), pos: 0, field };
    let x = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(x)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    field: Field,
}

fn is_minus(c: char) -> bool {
    c == '-' || c == '\u{2212}'
}

impl Parser {
    fn err(&self, msg: &str) -> GwError {
        GwError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<GWElement, GwError> {
        let mut sign = 1;
        match self.peek() {
            Some('+') => self.pos += 1,
            Some(c) if is_minus(c) => {
                self.pos += 1;
                sign = -1;
            }
            _ => {}
        }
        let mut acc = self.term()?.scale(sign);
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(c) if is_minus(c) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_atom(c: char) -> bool {
        c.is_ascii_digit() || matches!(c, '<' | '⟨' | '(' | 'h' | 'e' | 'ε')
    }

    fn term(&mut self) -> Result<GWElement, GwError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(c) if Self::starts_atom(c) => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<GWElement, GwError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent out of range"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, GwError> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(BigInt::from_str(&s).unwrap())
    }

    fn atom(&mut self) -> Result<GWElement, GwError> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end of input"))?;
        match c {
            d if d.is_ascii_digit() => {
                let n = self.integer()?;
                let n: i64 = n.try_into().map_err(|_| self.err("integer out of range"))?;
                Ok(GWElement::from_i64(self.field, n))
            }
            '(' => {
                self.pos += 1;
                let x = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(x)
            }
            '<' | '⟨' => {
                let close = if c == '<' { '>' } else { '⟩' };
                self.pos += 1;
                let start = self.pos;
                let Some(end) = self.chars[start..].iter().position(|&x| x == close) else {
                    return Err(self.err("unclosed bracket"));
                };
                let body: String = self.chars[start..start + end].iter().collect();
                let mut out = GWElement::zero(self.field);
                let mut offset = start;
                for item in body.split(',') {
                    let a = self.class_item(item.trim(), offset)?;
                    out = &out + &GWElement::class(self.field, a)?;
                    offset += item.chars().count() + 1;
                }
                self.pos = start + end + 1;
                Ok(out)
            }
            'ε' => {
                self.pos += 1;
                Ok(GWElement::epsilon(self.field))
            }
            _ if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let word: String = self.chars[start..self.pos].iter().collect();
                match word.as_str() {
                    "h" => Ok(GWElement::hyperbolic(self.field)),
                    "e" | "eps" | "epsilon" => Ok(GWElement::epsilon(self.field)),
                    _ => {
                        self.pos = start;
                        Err(self.err(&format!("unknown symbol '{word}'")))
                    }
                }
            }
            _ => Err(self.err(&format!("unexpected '{c}'"))),
        }
    }

    fn class_item(&self, item: &str, at: usize) -> Result<SquareClass, GwError> {
        let fail = |msg: &str| GwError::Parse { pos: at, msg: msg.into() };
        match (item, self.field) {
            ("ns", Field::Finite(_)) => return Ok(SquareClass::Finite(FpClass::NonSquare)),
            ("+", Field::RealClosed) => return Ok(SquareClass::Real(RealClass::Pos)),
            ("-" | "\u{2212}", Field::RealClosed) => return Ok(SquareClass::Real(RealClass::Neg)),
            _ => {}
        }
        let text = item.replace('\u{2212}', "-");
        let q = BigRational::from_str(&text).map_err(|_| fail(&format!("bad class '{item}'")))?;
        if q.is_zero() {
            return Err(fail("class of zero"));
        }
        Ok(normalize_square_class(self.field, &q)?)
    }
}
