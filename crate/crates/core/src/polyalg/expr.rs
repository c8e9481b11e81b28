//! Recursive-descent parser for polynomial expressions:
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power ('*' power)*
//! power  := factor ('^' integer)?
//! factor := rational | ident | '(' expr ')' | '-' factor
//! ```
//!
//! Rationals are integers, `a/b`, or finite decimals. The unary minus and
//! `^` forms are accepted so that rendered polynomials parse back.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::polyalg::Polynomial;
use crate::scalar::parse_rational;
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(text: &str) -> std::result::Result<Lexer, (usize, String)> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
                continue;
            }
            '+' => toks.push((Tok::Plus, col)),
            '-' => toks.push((Tok::Minus, col)),
            '*' => toks.push((Tok::Star, col)),
            '/' => toks.push((Tok::Slash, col)),
            '^' => toks.push((Tok::Caret, col)),
            '(' => toks.push((Tok::LParen, col)),
            ')' => toks.push((Tok::RParen, col)),
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                toks.push((Tok::Num(chars[start..i].iter().collect()), col));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
                continue;
            }
            other => return Err((col, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    Ok(Lexer {
        toks,
        end: chars.len() + 1,
    })
}

struct Parser<'a, F> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
    resolve: F,
}

type PResult<T> = std::result::Result<T, (usize, String)>;

impl<F: FnMut(&str) -> Option<usize>> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, c)| c).unwrap_or(self.end)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> PResult<Polynomial<Rational>> {
        let negate = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<Polynomial<Rational>> {
        let mut acc = self.power()?;
        while self.eat(&Tok::Star) {
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> PResult<Polynomial<Rational>> {
        let base = self.factor()?;
        if self.eat(&Tok::Caret) {
            let col = self.col();
            match self.toks.get(self.pos) {
                Some((Tok::Num(n), _)) => {
                    let e: u32 = n
                        .parse()
                        .map_err(|_| (col, format!("invalid exponent `{n}`")))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err((col, "expected integer exponent".into())),
            }
        }
        Ok(base)
    }

    fn factor(&mut self) -> PResult<Polynomial<Rational>> {
        let col = self.col();
        let tok = self.toks.get(self.pos).map(|(t, _)| t.clone());
        match tok {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut value = parse_rational(&n).ok_or((col, format!("invalid number `{n}`")))?;
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let dcol = self.col();
                    match self.toks.get(self.pos) {
                        Some((Tok::Num(d), _)) if !d.contains('.') => {
                            let d: BigInt = d
                                .parse()
                                .map_err(|_| (dcol, format!("invalid denominator `{d}`")))?;
                            if d == BigInt::from(0) {
                                return Err((dcol, "zero denominator".into()));
                            }
                            self.pos += 1;
                            value /= BigRational::from_integer(d);
                        }
                        _ => return Err((dcol, "expected integer denominator after `/`".into())),
                    }
                }
                Ok(Polynomial::constant(value))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match (self.resolve)(&name) {
                    Some(v) => Ok(Polynomial::var(v)),
                    None => Err((col, format!("unknown parameter `{name}`"))),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err((self.col(), "expected `)`".into()));
                }
                Ok(inner)
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(t) => Err((col, format!("unexpected token {t:?}"))),
            None => Err((col, "unexpected end of expression".into())),
        }
    }
}

/// Parses `text` located at `line`, columns offset by `column_offset`.
pub(crate) fn parse_expr_at(
    text: &str,
    line: usize,
    column_offset: usize,
    resolve: impl FnMut(&str) -> Option<usize>,
) -> Result<Polynomial<Rational>> {
    let wrap = |(col, msg): (usize, String)| Error::parse(line, column_offset + col, msg);
    let lexer = lex(text).map_err(wrap)?;
    let mut parser = Parser {
        toks: &lexer.toks,
        pos: 0,
        end: lexer.end,
        resolve,
    };
    let poly = parser.expr().map_err(wrap)?;
    if parser.pos != lexer.toks.len() {
        return Err(wrap((parser.col(), "trailing input".into())));
    }
    Ok(poly)
}

/// Parses a polynomial over the named parameters (index = position in
/// `names`).
pub fn parse_polynomial(text: &str, names: &[String]) -> Result<Polynomial<Rational>> {
    parse_expr_at(text, 1, 0, |n| names.iter().position(|p| p == n))
}
