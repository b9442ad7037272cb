//! Recursive-descent parser for the polynomial / rational-function grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | name | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Polynomial, RationalFunction};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse { column, message: message.into() }
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push((Tok::Int(text.parse().expect("digits")), col));
                continue;
            }
            a if a.is_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Name(chars[start..i].iter().collect()), col));
                continue;
            }
            other => return Err(err(col, format!("unexpected character `{other}`"))),
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [String],
    end_col: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
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

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    let col = self.col();
                    self.pos += 1;
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(err(col, "division by zero"));
                    }
                    acc = acc.checked_div(&d).expect("nonzero divisor");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    let e: u32 = e
                        .try_into()
                        .map_err(|_| err(col, "exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(err(col, "expected a non-negative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        let n = self.vars.len();
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(RationalFunction::from(Polynomial::constant(n, Rational::from_integer(v))))
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(RationalFunction::from(Polynomial::var(n, i))),
                    None => Err(err(col, format!("unknown variable {name}"))),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(err(self.col(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(t) => Err(err(col, format!("unexpected token {t:?}"))),
            None => Err(err(col, "unexpected end of input")),
        }
    }
}

/// Parses a rational function over the declared variables.
pub fn parse_rational_function(s: &str, vars: &[String]) -> Result<RationalFunction> {
    let toks = tokenize(s)?;
    let mut parser = Parser { toks, pos: 0, vars, end_col: s.chars().count() + 1 };
    let out = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(err(parser.col(), "unexpected trailing input"));
    }
    Ok(out)
}

/// Parses an exact rational: `p`, `p/q`, or a decimal such as `-0.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || err(1, format!("malformed rational `{t}`"));
    if let Some((a, b)) = t.split_once('/') {
        let num: BigInt = a.trim().parse().map_err(|_| bad())?;
        let den: BigInt = b.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(err(1, "zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    let v: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(v))
}

/// A signed top-level summand of an expression, with the 1-based column
/// where its text starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Summand {
    pub column: usize,
    pub negative: bool,
    pub text: String,
}

/// Splits at `+`/`-` outside parentheses; a sign directly after an operator
/// or `(` is unary and stays inside its summand.
pub(crate) fn split_summands(s: &str) -> Result<Vec<Summand>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut negative = false;
    let mut start = 0;
    let mut prev: Option<char> = None;
    let flush = |from: usize, to: usize, negative: bool, out: &mut Vec<Summand>| -> Result<()> {
        let raw: String = chars[from..to].iter().collect();
        let lead = raw.len() - raw.trim_start().len();
        let text = raw.trim().to_string();
        if text.is_empty() {
            return Err(err(from + 1, "empty term"));
        }
        out.push(Summand { column: from + lead + 1, negative, text });
        Ok(())
    };
    for (i, &c) in chars.iter().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(err(i + 1, "unbalanced `)`"));
                }
            }
            '+' | '-' if depth == 0 => {
                let unary = matches!(prev, None | Some('*' | '/' | '^' | '(' | '+' | '-'));
                if !unary {
                    flush(start, i, negative, &mut out)?;
                    negative = c == '-';
                    start = i + 1;
                } else if prev.is_none() {
                    negative = c == '-';
                    start = i + 1;
                }
            }
            _ => {}
        }
        if !c.is_whitespace() {
            prev = Some(c);
        }
    }
    if depth != 0 {
        return Err(err(chars.len() + 1, "expected `)`"));
    }
    flush(start, chars.len(), negative, &mut out)?;
    Ok(out)
}

/// Splits a summand into its coefficient text and a trailing factor
/// separated by `*` or whitespace at depth 0. Returns the column offset of
/// the trailing factor within the summand.
pub(crate) fn split_last_factor(term: &str) -> (String, String, usize) {
    let chars: Vec<char> = term.chars().collect();
    let mut depth = 0i32;
    let mut cut = None;
    for (i, &c) in chars.iter().enumerate() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' | ' ' if depth == 0 => cut = Some(i),
            _ => {}
        }
    }
    let last: String = match cut {
        Some(i) => chars[i + 1..].iter().collect(),
        None => term.to_string(),
    };
    let head: String = match cut {
        Some(i) => chars[..i].iter().collect::<String>().trim().trim_end_matches('*').trim().to_string(),
        None => String::new(),
    };
    (head, last.trim().to_string(), cut.map_or(0, |i| i + 1))
}

/// Resolves `dNAME` or `d_NAME` to a variable index.
pub(crate) fn differential_index(tok: &str, vars: &[String]) -> Option<usize> {
    let name = tok.strip_prefix("d_").filter(|n| vars.iter().any(|v| v == n)).or_else(|| tok.strip_prefix('d'))?;
    vars.iter().position(|v| v == name)
}

/// Parses a coefficient, shifting error columns by `offset`.
pub(crate) fn parse_coefficient(text: &str, vars: &[String], offset: usize) -> Result<RationalFunction> {
    if text.is_empty() {
        return Ok(RationalFunction::one(vars.len()));
    }
    parse_rational_function(text, vars).map_err(|e| match e {
        Error::Parse { column, message } => Error::Parse { column: column + offset, message },
        other => other,
    })
}
