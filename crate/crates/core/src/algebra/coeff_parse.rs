//! Parser for exact coefficient strings.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*' factor) | ('/' integer))*
//! factor := integer | 'z' K ['^' ['-'] integer] | '(' expr ')' ['^' integer]
//! ```
//!
//! `zK` denotes the primitive root e^{2πi/K}; it must lie in the session field.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::cyclo::{CycloField, CycloNumber, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Zeta(u32),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexed {
    tok: Tok,
    column: usize,
    text: String,
}

fn err(column: usize, token: &str, message: &'static str) -> Error {
    Error::CoefficientParse {
        column,
        token: token.to_string(),
        message,
    }
}

fn lex(text: &str) -> Result<Vec<Lexed>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (byte, c) = chars[i];
        let column = text[..byte].chars().count() + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Lexed {
                tok,
                column,
                text: c.to_string(),
            });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            while i < chars.len()
                && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '.')
            {
                i += 1;
            }
            let end = chars.get(i).map_or(text.len(), |(b, _)| *b);
            let word = &text[byte..end];
            if word.contains('.') || word.contains(['e', 'E']) {
                return Err(err(column, word, "floating literals are not exact"));
            }
            if !word.chars().all(|ch| ch.is_ascii_digit()) {
                return Err(err(column, word, "malformed integer"));
            }
            let value: BigInt = word.parse().map_err(|_| err(column, word, "malformed integer"))?;
            out.push(Lexed {
                tok: Tok::Int(value),
                column,
                text: word.to_string(),
            });
            continue;
        }
        if c == 'z' {
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let end = chars.get(i).map_or(text.len(), |(b, _)| *b);
            let digits = &text[chars.get(start).map_or(text.len(), |(b, _)| *b)..end];
            let word = &text[byte..end];
            let k: u32 = digits
                .parse()
                .map_err(|_| err(column, word, "expected conductor after `z`"))?;
            if k == 0 {
                return Err(err(column, word, "root of unity of order 0"));
            }
            out.push(Lexed {
                tok: Tok::Zeta(k),
                column,
                text: word.to_string(),
            });
            continue;
        }
        let end = chars.get(i + 1).map_or(text.len(), |(b, _)| *b);
        return Err(err(column, &text[byte..end], "unexpected character"));
    }
    Ok(out)
}

struct Parser<'a> {
    field: &'a Arc<CycloField>,
    toks: Vec<Lexed>,
    pos: usize,
    end_column: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn here(&self) -> (usize, String) {
        match self.toks.get(self.pos) {
            Some(l) => (l.column, l.text.clone()),
            None => (self.end_column, String::new()),
        }
    }

    fn fail(&self, message: &'static str) -> Error {
        let (column, token) = self.here();
        err(column, &token, message)
    }

    fn integer(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.fail("expected integer")),
        }
    }

    fn small_exponent(&mut self, allow_negative: bool) -> Result<i64> {
        let negative = if allow_negative && self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let (column, token) = self.here();
        let v = self
            .integer()?
            .to_i64()
            .filter(|v| *v <= 1_000_000)
            .ok_or_else(|| err(column, &token, "exponent too large"))?;
        Ok(if negative { -v } else { v })
    }

    fn expr(&mut self) -> Result<CycloNumber> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<CycloNumber> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let (column, token) = self.here();
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(err(column, &token, "division by zero"));
                    }
                    acc = acc.scale(&Rational::new(1.into(), den));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<CycloNumber> {
        let (column, token) = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(CycloNumber::from_rational(self.field, Rational::from_integer(v)))
            }
            Some(Tok::Zeta(k)) => {
                self.pos += 1;
                let e = if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    self.small_exponent(true)?
                } else {
                    1
                };
                zeta_in_field(self.field, k, e)
                    .ok_or_else(|| err(column, &token, "root of unity not in the session field"))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.fail("expected `)`"));
                }
                self.pos += 1;
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    let e = self.small_exponent(false)?;
                    return Ok(inner.pow(e as u64));
                }
                Ok(inner)
            }
            _ => Err(self.fail("expected number, root of unity or `(`")),
        }
    }
}

/// ζ_K^e expressed in Q(ζ_N), when ζ_K belongs to that field.
pub fn zeta_in_field(field: &Arc<CycloField>, k: u32, e: i64) -> Option<CycloNumber> {
    let n = field.order();
    if n.is_multiple_of(k) {
        return Some(CycloNumber::zeta_power(field, (n / k) as i64 * e));
    }
    // Q(ζ_N) = Q(ζ_2N) for odd N, with ζ_2N = -ζ_N^{(N+1)/2}
    if !n.is_multiple_of(2) && (2 * n).is_multiple_of(k) {
        let steps = (2 * n / k) as i64 * e;
        let base = -CycloNumber::zeta_power(field, (n as i64 + 1) / 2);
        let steps = steps.rem_euclid(2 * n as i64) as u64;
        return Some(base.pow(steps));
    }
    None
}

pub(crate) fn parse(field: &Arc<CycloField>, text: &str) -> Result<CycloNumber> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(err(1, "", "empty coefficient"));
    }
    let mut parser = Parser {
        field,
        toks,
        pos: 0,
        end_column: text.chars().count() + 1,
    };
    let value = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(parser.fail("trailing input"));
    }
    Ok(value)
}
