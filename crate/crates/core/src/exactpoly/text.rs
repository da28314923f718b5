//! Text format for polynomials.
//!
//! A polynomial prints as a sum of terms `coeff*var^k*...`, leading term
//! first. Integer coefficients print bare, every other coefficient in
//! parentheses, e.g. `(1/2)*d + (3/2)*l - (1/2)*b` or `(1+2i)*d^2`. The
//! parser accepts that output and ordinary arithmetic expressions over
//! `+ - * ^`, division by constants and parentheses. `i` is the imaginary
//! unit and is never a variable name.

use std::fmt;
use std::str::FromStr;

use super::{MPoly, Monomial, PolyError, Scalar, Var};

fn fmt_coeff(c: &Scalar) -> String {
    if c.is_integer() {
        c.to_string()
    } else {
        format!("({c})")
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&fmt_coeff(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_coeff(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, ch) = chars[k];
        if ch.is_whitespace() {
            k += 1;
        } else if ch.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            out.push((pos, Tok::Num(chars[start..k].iter().map(|c| c.1).collect())));
        } else if ch.is_alphabetic() || ch == '_' || ch == '∂' {
            let start = k;
            k += 1;
            while k < chars.len()
                && (chars[k].1.is_alphanumeric() || matches!(chars[k].1, '_' | '\'' | '′'))
            {
                k += 1;
            }
            out.push((pos, Tok::Ident(chars[start..k].iter().map(|c| c.1).collect())));
        } else if "+-*/^()".contains(ch) {
            out.push((pos, Tok::Op(ch)));
            k += 1;
        } else {
            return Err(PolyError::Parse {
                pos,
                msg: format!("unexpected character `{ch}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> PolyError {
        let pos = self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.src.len());
        PolyError::Parse {
            pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc += &self.term()?;
            } else if self.eat('-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.eat('/') {
                let d = self.factor()?;
                let c = d
                    .as_constant()
                    .ok_or_else(|| self.err("division by a non-constant"))?;
                acc = acc.scale(&c.inv()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<MPoly, PolyError> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected a non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly, PolyError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(MPoly::constant(n.parse()?))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "i" {
                    Ok(MPoly::constant(Scalar::i()))
                } else {
                    Ok(MPoly::var(Var::new(&name)))
                }
            }
            Some(Tok::Op('(')) => {
                let open = self.pos;
                let close = self.matching(open)?;
                let start = self.toks[open].0 + 1;
                let end = self.toks[close].0;
                if let Ok(c) = self.src[start..end].parse::<Scalar>() {
                    self.pos = close + 1;
                    return Ok(MPoly::constant(c));
                }
                self.pos = open + 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(_) => Err(self.err("unexpected token")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn matching(&self, open: usize) -> Result<usize, PolyError> {
        let mut depth = 0usize;
        for k in open..self.toks.len() {
            match self.toks[k].1 {
                Tok::Op('(') => depth += 1,
                Tok::Op(')') => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(k);
                    }
                }
                _ => {}
            }
        }
        Err(PolyError::Parse {
            pos: self.toks[open].0,
            msg: "unbalanced `(`".into(),
        })
    }
}

impl FromStr for MPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            src: s,
            toks: tokenize(s)?,
            pos: 0,
        };
        if p.toks.is_empty() {
            return Err(p.err("empty polynomial"));
        }
        let out = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

/// Parses a polynomial literal; panics on malformed input. Intended for
/// tables and tests with fixed, known-good text.
pub fn poly(s: &str) -> MPoly {
    s.parse()
        .unwrap_or_else(|e| panic!("bad polynomial literal `{s}`: {e}"))
}

/// Printable form of a monomial used as a map key in reports.
pub fn monomial_label(m: &Monomial) -> String {
    m.to_string()
}
