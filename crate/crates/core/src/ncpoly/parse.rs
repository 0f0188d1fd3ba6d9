//! Expression parser for `Pol(C)_q`.
//!
//! ```text
//! expr    = term , { ( "+" | "-" ) , term } ;
//! term    = unary , { [ "*" ] , unary } ;
//! unary   = ( "+" | "-" ) , unary | power ;
//! power   = atom , [ "^" , integer ] ;
//! atom    = number | "i" | "q" | "z" | "z*" | "y" | "(" , expr , ")" ;
//! number  = digits , [ "." , digits ] , [ ( "e" | "E" ) , [ "+" | "-" ] , digits ] , [ "i" ] ;
//! ```
//!
//! `z*` is the adjoint generator when the star follows `z` directly; a star
//! separated by whitespace is a product. Products keep the written order and
//! are normal-ordered as they are formed. `y` stands for `1 - z z*` and `q`
//! for the numeric deformation parameter.

use super::{NormalPoly, ReorderTable};
use crate::error::{Error, Result};
use crate::qspecial::Complex;

/// Largest total degree accepted by default.
pub const DEFAULT_DEGREE_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    pub degree_cap: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Complex),
    Z,
    ZStar,
    Y,
    Q,
    I,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let start = i;
        match ch {
            c if c.is_whitespace() => {
                i += 1;
            }
            '0'..='9' | '.' => {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut k = i + 1;
                    if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                        k += 1;
                    }
                    if k < chars.len() && chars[k].is_ascii_digit() {
                        while k < chars.len() && chars[k].is_ascii_digit() {
                            k += 1;
                        }
                        i = k;
                    }
                }
                let lit: String = chars[start..i].iter().collect();
                let v: f64 = lit.parse().map_err(|_| Error::Syntax {
                    pos: start,
                    msg: format!("malformed number '{lit}'"),
                })?;
                if i < chars.len() && chars[i] == 'i' && !ident_continues(&chars, i + 1) {
                    i += 1;
                    out.push((start, Tok::Num(Complex::new(0.0, v))));
                } else {
                    out.push((start, Tok::Num(Complex::new(v, 0.0))));
                }
            }
            'z' => {
                i += 1;
                if i < chars.len() && chars[i] == '*' {
                    i += 1;
                    out.push((start, Tok::ZStar));
                } else {
                    out.push((start, Tok::Z));
                }
            }
            'y' => {
                i += 1;
                out.push((start, Tok::Y));
            }
            'q' => {
                i += 1;
                out.push((start, Tok::Q));
            }
            'i' => {
                i += 1;
                out.push((start, Tok::I));
            }
            '+' => {
                i += 1;
                out.push((start, Tok::Plus));
            }
            '-' | '\u{2212}' => {
                i += 1;
                out.push((start, Tok::Minus));
            }
            '*' | '\u{b7}' => {
                i += 1;
                out.push((start, Tok::Star));
            }
            '^' => {
                i += 1;
                out.push((start, Tok::Caret));
            }
            '(' => {
                i += 1;
                out.push((start, Tok::LParen));
            }
            ')' => {
                i += 1;
                out.push((start, Tok::RParen));
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    Ok(out)
}

fn ident_continues(chars: &[char], i: usize) -> bool {
    i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_')
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
    q: f64,
    opts: &'a ParseOptions,
    table: ReorderTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn check_cap(&self, p: &NormalPoly) -> Result<()> {
        if p.degree() > self.opts.degree_cap {
            return Err(Error::Overflow {
                degree: p.degree(),
                cap: self.opts.degree_cap,
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<NormalPoly> {
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

    fn starts_atom(t: Option<&Tok>) -> bool {
        matches!(
            t,
            Some(Tok::Num(_) | Tok::Z | Tok::ZStar | Tok::Y | Tok::Q | Tok::I | Tok::LParen)
        )
    }

    fn term(&mut self) -> Result<NormalPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else if !Self::starts_atom(self.peek()) {
                return Ok(acc);
            }
            let rhs = self.unary()?;
            acc = acc.multiply_with(&rhs, &mut self.table);
            self.check_cap(&acc)?;
        }
    }

    fn unary(&mut self) -> Result<NormalPoly> {
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

    fn power(&mut self) -> Result<NormalPoly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.here();
        let n = match self.toks.get(self.pos) {
            Some((_, Tok::Num(c))) if c.im == 0.0 && c.re >= 0.0 && c.re.fract() == 0.0 => {
                c.re as usize
            }
            _ => {
                return Err(Error::Syntax {
                    pos: at,
                    msg: "exponent must be a nonnegative integer".into(),
                })
            }
        };
        self.pos += 1;
        if base.degree().saturating_mul(n) > self.opts.degree_cap {
            return Err(Error::Overflow {
                degree: base.degree().saturating_mul(n),
                cap: self.opts.degree_cap,
            });
        }
        let mut acc = NormalPoly::one(self.q);
        for _ in 0..n {
            acc = acc.multiply_with(&base, &mut self.table);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<NormalPoly> {
        let at = self.here();
        let tok = self.peek().cloned().ok_or(Error::Syntax {
            pos: at,
            msg: "unexpected end of input".into(),
        })?;
        self.pos += 1;
        let q = self.q;
        Ok(match tok {
            Tok::Num(c) => NormalPoly::constant(q, c),
            Tok::I => NormalPoly::constant(q, Complex::new(0.0, 1.0)),
            Tok::Q => NormalPoly::constant(q, Complex::new(q, 0.0)),
            Tok::Z => NormalPoly::z(q),
            Tok::ZStar => NormalPoly::z_star(q),
            Tok::Y => NormalPoly::y(q),
            Tok::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Error::Syntax {
                        pos: self.here(),
                        msg: "expected ')'".into(),
                    });
                }
                self.pos += 1;
                inner
            }
            other => {
                return Err(Error::Syntax {
                    pos: at,
                    msg: format!("unexpected token {other:?}"),
                })
            }
        })
    }
}

/// Parses `text` into normal order at deformation parameter `q`.
pub fn parse_expr(text: &str, q: f64, opts: &ParseOptions) -> Result<NormalPoly> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        len: text.chars().count(),
        q,
        opts,
        table: ReorderTable::new(q),
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Syntax {
            pos: p.here(),
            msg: "unexpected trailing input".into(),
        });
    }
    Ok(out)
}
