//! Text grammar for polynomials and rational functions in one variable.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/')? unary)*      juxtaposition multiplies
//! unary   := ('+' | '-') unary | power
//! power   := atom ('^' integer)?
//! atom    := integer | variable | '(' expr ')'
//! ```
//! The variable may be written `t`, `T`, `x` or `X`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Poly, PolyError, RationalFunction};
use crate::field::FieldOps;

const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let end = if j < chars.len() { chars[j].0 } else { s.len() };
                out.push((pos, Tok::Num(s[pos..end].parse().unwrap())));
                i = j;
            }
            't' | 'T' | 'x' | 'X' => {
                out.push((pos, Tok::Var));
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push((pos, Tok::Op(c)));
                i += 1;
            }
            '\u{2212}' => {
                out.push((pos, Tok::Op('-')));
                i += 1;
            }
            _ => {
                return Err(PolyError::Parse { pos, msg: format!("unexpected character {c:?}") });
            }
        }
    }
    Ok(out)
}

struct Parser<'a, K: FieldOps> {
    k: &'a K,
    toks: Vec<(usize, Tok)>,
    i: usize,
    len: usize,
}

impl<'a, K: FieldOps> Parser<'a, K> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Parse { pos: self.pos(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<RationalFunction<K>, PolyError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let c = *c;
            self.i += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction<K>, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.i += 1;
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                Some(Tok::Op('/')) => {
                    self.i += 1;
                    let at = self.pos();
                    let rhs = self.unary()?;
                    acc = acc
                        .div(&rhs)
                        .map_err(|_| PolyError::Parse { pos: at, msg: "division by zero".into() })?;
                }
                Some(Tok::Num(_)) | Some(Tok::Var) | Some(Tok::Op('(')) => {
                    let rhs = self.power()?;
                    acc = &acc * &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction<K>, PolyError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.i += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.i += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction<K>, PolyError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.i += 1;
            let e = match self.peek() {
                Some(Tok::Num(n)) => n.clone(),
                _ => return self.err("expected a nonnegative integer exponent"),
            };
            let e: u32 = match u32::try_from(&e) {
                Ok(e) if e <= MAX_EXPONENT => e,
                _ => return self.err("exponent too large"),
            };
            self.i += 1;
            return base.pow(e as i32);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction<K>, PolyError> {
        let k = self.k;
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                let at = self.pos();
                self.i += 1;
                let c = k
                    .from_rational(&BigRational::from_integer(n))
                    .map_err(|e| PolyError::Parse { pos: at, msg: e.to_string() })?;
                Ok(RationalFunction::constant(k, c))
            }
            Some(Tok::Var) => {
                self.i += 1;
                Ok(RationalFunction::x(k))
            }
            Some(Tok::Op('(')) => {
                self.i += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.i += 1;
                        Ok(e)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a rational function of `t` with coefficients in `k`.
pub fn parse_rational_function<K: FieldOps>(k: &K, s: &str) -> Result<RationalFunction<K>, PolyError> {
    let toks = tokenize(s)?;
    let mut p = Parser { k, toks, i: 0, len: s.len() };
    let out = p.expr()?;
    if p.i != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses a polynomial; divisions are allowed only by nonzero constants.
pub fn parse_poly<K: FieldOps>(k: &K, s: &str) -> Result<Poly<K>, PolyError> {
    let f = parse_rational_function(k, s)?;
    match f.as_poly() {
        Some(p) => Ok(p.clone()),
        None => Err(PolyError::NotPolynomial),
    }
}
