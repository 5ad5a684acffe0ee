//! Text form of constant expressions and tower elements.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' int)?
//! base   := '-' factor | int | sym '[' int '][' int ']' | '(' expr ')'
//! sym    := 'c' | 'u' | 'b'
//! ```
//!
//! Rational literals are spelled as integer quotients (`3/2`), which the
//! left-associative `/` reads back as the same value. Printing emits the
//! canonical form, so `print(parse(print(x))) == print(x)` byte for byte.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::poly::{Monomial, Poly, Rational, Var, VarKind};
use crate::ratfun::RatFun;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError { position, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Int(BigInt),
    Sym(VarKind),
    /// The letter `D`, only meaningful in operator text.
    D,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        let tok = match ch {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("ascii digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            b'c' => Tok::Sym(VarKind::Eigen),
            b'u' => Tok::Sym(VarKind::Free),
            b'b' => Tok::Sym(VarKind::Generator),
            b'D' => Tok::D,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            _ => {
                let c = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError::new(i, alloc::format!("unexpected character {c:?}")));
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

pub(crate) struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0, end: src.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(ParseError::new(at, alloc::format!("expected {what}"))),
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(ParseError::new(self.offset(), "trailing input"))
        }
    }

    fn small_int(&mut self) -> Result<u32, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => {
                u32::try_from(n).map_err(|_| ParseError::new(at, "index out of range"))
            }
            _ => Err(ParseError::new(at, "expected integer")),
        }
    }

    /// `[i][j]` after a symbol letter or `D` (the latter takes one index).
    pub(crate) fn bracket_index(&mut self) -> Result<u32, ParseError> {
        self.expect(Tok::LBracket, "'['")?;
        let at = self.offset();
        let i = self.small_int()?;
        if i == 0 {
            return Err(ParseError::new(at, "indices start at 1"));
        }
        self.expect(Tok::RBracket, "']'")?;
        Ok(i)
    }

    pub(crate) fn expr(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let at = self.offset();
                    let d = self.factor()?;
                    acc = acc.div(&d).ok_or_else(|| ParseError::new(at, "division by zero"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFun, ParseError> {
        let at = self.offset();
        let base = self.base()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let e = self.small_int()? as i64;
        let e = if negative { -e } else { e };
        base.pow(e).ok_or_else(|| ParseError::new(at, "negative power of zero"))
    }

    fn base(&mut self) -> Result<RatFun, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Minus) => Ok(self.factor()?.neg()),
            Some(Tok::Int(n)) => Ok(RatFun::from_rational(Rational::from_integer(n))),
            Some(Tok::Sym(kind)) => {
                let level = self.bracket_index()?;
                let index = self.bracket_index()?;
                Ok(RatFun::var(Var { kind, level, index }))
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => Err(ParseError::new(at, "expected number, symbol or '('")),
        }
    }

    pub(crate) fn peek_is(&self, t: &Tok) -> bool {
        self.peek() == Some(t)
    }

    pub(crate) fn eat(&mut self, t: Tok) -> bool {
        if self.peek_is(&t) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// Signed continuation `(('+'|'-') term)*` summed up; used after `D[i]`.
    pub(crate) fn signed_tail(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = RatFun::zero();
        loop {
            if self.eat(Tok::Plus) {
                acc = acc.add(&self.term()?);
            } else if self.eat(Tok::Minus) {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    pub(crate) fn expect_tok(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        self.expect(t, what)
    }
}



/// Parses any expression of the grammar into a reduced fraction.
pub fn parse_ratfun(src: &str) -> Result<RatFun, ParseError> {
    let mut p = Parser::new(src)?;
    if p.at_end() {
        return Err(ParseError::new(0, "empty expression"));
    }
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

fn write_rational_abs(out: &mut impl Write, q: &Rational) -> fmt::Result {
    if q.denom().is_one() {
        write!(out, "{}", q.numer().abs())
    } else {
        write!(out, "{}/{}", q.numer().abs(), q.denom())
    }
}

fn write_monomial(out: &mut impl Write, m: &Monomial) -> fmt::Result {
    for (k, (v, e)) in m.factors().iter().enumerate() {
        if k > 0 {
            out.write_char('*')?;
        }
        write!(out, "{v}")?;
        if *e > 1 {
            write!(out, "^{e}")?;
        }
    }
    Ok(())
}

/// Canonical polynomial text, leading term first.
pub fn write_poly(out: &mut impl Write, p: &Poly) -> fmt::Result {
    if p.is_zero() {
        return out.write_char('0');
    }
    for (k, (m, q)) in p.terms().iter().enumerate() {
        let neg = q.is_negative();
        match (k, neg) {
            (0, true) => out.write_char('-')?,
            (0, false) => {}
            (_, true) => out.write_str(" - ")?,
            (_, false) => out.write_str(" + ")?,
        }
        let unit = q.abs().is_one();
        if m.is_one() {
            write_rational_abs(out, q)?;
        } else if unit {
            write_monomial(out, m)?;
        } else {
            write_rational_abs(out, q)?;
            out.write_char('*')?;
            write_monomial(out, m)?;
        }
    }
    Ok(())
}

fn is_single_power(p: &Poly) -> bool {
    p.len() == 1 && p.terms()[0].1.is_one() && p.terms()[0].0.factors().len() == 1
}

/// Canonical fraction text: `num`, or `num/den` with parentheses where the
/// grammar needs them.
pub fn write_ratfun(out: &mut impl Write, r: &RatFun) -> fmt::Result {
    if r.is_polynomial() {
        return write_poly(out, r.numer());
    }
    let num = r.numer();
    if num.len() == 1 {
        write_poly(out, num)?;
    } else {
        out.write_char('(')?;
        write_poly(out, num)?;
        out.write_char(')')?;
    }
    out.write_char('/')?;
    if is_single_power(r.denom()) {
        write_poly(out, r.denom())
    } else {
        out.write_char('(')?;
        write_poly(out, r.denom())?;
        out.write_char(')')
    }
}

pub fn ratfun_to_string(r: &RatFun) -> String {
    let mut s = String::new();
    write_ratfun(&mut s, r).expect("writing to a String cannot fail");
    s
}

/// Wraps in parentheses unless the text is a single term.
pub(crate) fn grouped(r: &RatFun) -> String {
    let s = ratfun_to_string(r);
    let simple = r.is_polynomial() && r.numer().len() <= 1 && !s.starts_with('-');
    if simple {
        s
    } else {
        let mut out = String::with_capacity(s.len() + 2);
        out.push('(');
        out.push_str(&s);
        out.push(')');
        out
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ratfun(f, self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) -> String {
        parse_ratfun(s).unwrap().to_string()
    }

    #[test]
    fn prints_canonical_forms() {
        assert_eq!(rt("(c[1][1] + c[1][2]) - c[1][2]"), "c[1][1]");
        assert_eq!(rt("c[1][1]/c[1][1]"), "1");
        assert_eq!(rt("(c[1][1]^2 - c[1][2]^2)/(c[1][1] - c[1][2])"), "c[1][1] + c[1][2]");
        assert_eq!(rt("-3/2*b[1][1]"), "-3/2*b[1][1]");
        assert_eq!(rt("b[1][2]/b[1][1]"), "b[1][2]/b[1][1]");
        assert_eq!(rt("1/(b[1][1]*b[1][2])"), "1/(b[1][1]*b[1][2])");
        assert_eq!(rt("b[1][1]^-2"), "1/b[1][1]^2");
        assert_eq!(rt("0*c[1][1]"), "0");
    }

    #[test]
    fn reparsing_printed_text_is_stable() {
        for s in [
            "3/2^2",
            "(c[1][1] - 2*u[1][1])/(3*b[1][1] + c[1][2])",
            "-(b[2][1] - b[1][1])^3/7",
            "c[1][1]*b[1][1]^2 - 1/3",
            "-b[1][1]^2 + b[1][2]",
        ] {
            let once = rt(s);
            assert_eq!(rt(&once), once, "{s}");
        }
        assert_eq!(rt("3/2^2"), "3/4");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_ratfun("").is_err());
        assert!(parse_ratfun("c[1]").is_err());
        assert!(parse_ratfun("c[0][1]").is_err());
        assert!(parse_ratfun("1/0").is_err());
        assert!(parse_ratfun("(b[1][1]").is_err());
        assert!(parse_ratfun("b[1][1] b[1][2]").is_err());
        assert!(parse_ratfun("x").is_err());
        assert!(parse_ratfun("0^-1").is_err());
    }
}
