//! Recursive-descent parser for the polynomial expression language.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nonneg-int)?
//! base   := integer | integer '/' integer | identifier | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::{MPoly, PolyError, PolyRing, SigmaImage};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn syntax(pos: usize, message: impl Into<String>) -> PolyError {
    PolyError::Syntax {
        pos,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ring: &'a PolyRing,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MPoly, PolyError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        match self.bump() {
            Tok::Int(n) => {
                let e = u32::try_from(&n).map_err(|_| syntax(at, "exponent too large"))?;
                Ok(base.pow(e))
            }
            _ => Err(syntax(at, "expected a nonnegative integer exponent")),
        }
    }

    fn base(&mut self) -> Result<MPoly, PolyError> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(n) => {
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let dat = self.offset();
                    let d = match self.bump() {
                        Tok::Int(d) => d,
                        _ => return Err(syntax(dat, "expected an integer denominator")),
                    };
                    let c = self
                        .ring
                        .field()
                        .from_fraction(&n, &d)
                        .map_err(|_| syntax(dat, "denominator is zero in this field"))?;
                    Ok(MPoly::constant(self.ring, c))
                } else {
                    Ok(MPoly::constant(self.ring, self.ring.field().from_bigint(&n)))
                }
            }
            Tok::Ident(name) => MPoly::var_named(self.ring, &name),
            Tok::LParen => {
                let inner = self.expr()?;
                let cat = self.offset();
                match self.bump() {
                    Tok::RParen => Ok(inner),
                    _ => Err(syntax(cat, "expected `)`")),
                }
            }
            Tok::End => Err(syntax(at, "unexpected end of input")),
            t => Err(syntax(at, format!("unexpected token {}", describe(&t)))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Int(_) => "integer",
        Tok::Ident(_) => "identifier",
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Slash => "`/`",
        Tok::Caret => "`^`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
        Tok::End => "end of input",
    }
}

fn parse_in(text: &str, ring: &PolyRing) -> Result<MPoly, PolyError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, ring };
    let out = p.expr()?;
    match p.peek() {
        Tok::End => Ok(out),
        t => Err(syntax(p.offset(), format!("unexpected token {}", describe(t)))),
    }
}

/// Parses an element of `A`.
pub fn parse_poly(text: &str, ring: &PolyRing) -> Result<MPoly, PolyError> {
    parse_in(text, ring)
}

/// Parses an element of `A[x]` (the ring variables plus `x`).
pub fn parse_sigma_image(text: &str, ring: &PolyRing) -> Result<SigmaImage, PolyError> {
    let flat = ring.extended(&["x"]);
    let f = parse_in(text, &flat)?;
    Ok(SigmaImage::from_flat(ring, &f))
}
