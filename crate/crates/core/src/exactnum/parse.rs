//! Parser for exact coordinates such as `sqrt5/2`, `-33/32`,
//! `1/2 + -3/4*sqrt5` or `(1+sqrt5)/2`. Decimal literals are read exactly.

use super::field::FieldElement;
use super::rational::Rational;
use crate::error::ExactError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Sqrt5,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn err(input: &str, reason: impl Into<String>) -> ExactError {
    ExactError::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

fn decimal(text: &str) -> Option<Rational> {
    let (int, frac) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    let digits = format!("{int}{frac}");
    if digits.is_empty() {
        return None;
    }
    let n = Rational::parse_integer(&digits)?;
    let mut den = Rational::one();
    let ten = Rational::from_integer(10);
    for _ in 0..frac.len() {
        den = &den * &ten;
    }
    n.checked_div(&den)
}

fn lex(input: &str) -> Result<Vec<Tok>, ExactError> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' | '−' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' | '·' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '√' => {
                if chars.get(i + 1) == Some(&'5') {
                    out.push(Tok::Sqrt5);
                    i += 2;
                } else {
                    return Err(err(input, "only √5 is supported"));
                }
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = decimal(&text).ok_or_else(|| err(input, format!("bad number {text:?}")))?;
                out.push(Tok::Num(n));
            }
            _ => {
                let rest: String = chars[i..].iter().collect();
                if let Some(r) = rest.strip_prefix("sqrt(5)") {
                    out.push(Tok::Sqrt5);
                    i = chars.len() - r.chars().count();
                } else if let Some(r) = rest.strip_prefix("sqrt5") {
                    out.push(Tok::Sqrt5);
                    i = chars.len() - r.chars().count();
                } else {
                    return Err(err(input, format!("unexpected character {c:?}")));
                }
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    input: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Result<FieldElement, ExactError> {
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

    fn term(&mut self) -> Result<FieldElement, ExactError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.try_div(&d)?;
                }
                // Juxtaposition such as `3sqrt5`.
                Some(Tok::Sqrt5) | Some(Tok::LParen) => {
                    acc = &acc * &self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<FieldElement, ExactError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<FieldElement, ExactError> {
        let tok = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| err(self.input, "unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Num(r) => Ok(FieldElement::from_rational(r)),
            Tok::Sqrt5 => Ok(FieldElement::sqrt5()),
            Tok::LParen => {
                let v = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(err(self.input, "missing ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            t => Err(err(self.input, format!("unexpected token {t:?}"))),
        }
    }
}

pub fn parse_field_element(input: &str) -> Result<FieldElement, ExactError> {
    let toks = lex(input)?;
    if toks.is_empty() {
        return Err(err(input, "empty expression"));
    }
    let mut p = Parser { toks, pos: 0, input };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(input, "trailing input"));
    }
    Ok(v)
}
