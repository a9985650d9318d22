//! Parser for coefficient expressions.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := '-' factor | primary ('^' uint)?
//! primary := number | generator | '(' expr ')'
//! number  := uint ('/' uint)?        -- fractions only over a Q base
//! ```
//!
//! The same syntax is produced by `RingElement::Display`, so canonical
//! output round-trips through this parser.

use std::sync::Arc;

use num::BigInt;

use crate::error::{Error, Result};
use crate::ring::{GradedRing, RingElement};
use crate::scalar::{BaseRing, Scalar};

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
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        loop {
            while lx.pos < lx.src.len() && lx.src[lx.pos].is_ascii_whitespace() {
                lx.pos += 1;
            }
            if lx.pos >= lx.src.len() {
                break;
            }
            let start = lx.pos;
            let c = lx.src[lx.pos];
            let tok = match c {
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'/' => {
                    lx.pos += 1;
                    Tok::Slash
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b'0'..=b'9' => {
                    while lx.pos < lx.src.len() && lx.src[lx.pos].is_ascii_digit() {
                        lx.pos += 1;
                    }
                    let text = std::str::from_utf8(&lx.src[start..lx.pos]).unwrap();
                    Tok::Int(text.parse().unwrap())
                }
                c if c.is_ascii_alphabetic() => {
                    while lx.pos < lx.src.len()
                        && (lx.src[lx.pos].is_ascii_alphanumeric() || lx.src[lx.pos] == b'_')
                    {
                        lx.pos += 1;
                    }
                    Tok::Ident(
                        std::str::from_utf8(&lx.src[start..lx.pos])
                            .unwrap()
                            .to_string(),
                    )
                }
                other => {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!("unexpected character `{}`", other as char),
                    })
                }
            };
            out.push((start, tok));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    ring: &'a Arc<GradedRing>,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(_, t)| t.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.idx += 1;
            Ok(())
        } else {
            Err(Error::Parse {
                pos: self.pos(),
                msg: format!("expected {:?}", tok),
            })
        }
    }

    fn expr(&mut self) -> Result<RingElement> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.idx += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Tok::Minus => {
                    self.idx += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RingElement> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.idx += 1;
            acc = acc.mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RingElement> {
        if self.peek() == Some(&Tok::Minus) {
            self.idx += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.idx += 1;
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n.try_into().map_err(|_| Error::Parse {
                        pos,
                        msg: "exponent out of range".into(),
                    })?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse {
                    pos,
                    msg: "expected a nonnegative integer exponent".into(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<RingElement> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.idx += 1;
                    let dpos = self.pos();
                    match self.bump() {
                        Some(Tok::Int(d)) => {
                            if self.ring.base() != BaseRing::Rationals {
                                return Err(Error::Parse {
                                    pos,
                                    msg: "fraction over an integer base ring".into(),
                                });
                            }
                            let c = Scalar::fraction(self.ring.base(), n, d).map_err(|e| {
                                Error::Parse {
                                    pos: dpos,
                                    msg: e.to_string(),
                                }
                            })?;
                            Ok(RingElement::constant(self.ring, c))
                        }
                        _ => Err(Error::Parse {
                            pos: dpos,
                            msg: "expected denominator".into(),
                        }),
                    }
                } else {
                    Ok(RingElement::constant(
                        self.ring,
                        match self.ring.base() {
                            BaseRing::Integers => Scalar::Int(n),
                            BaseRing::Rationals => Scalar::Rat(num::BigRational::from(n)),
                        },
                    ))
                }
            }
            Some(Tok::Ident(name)) => RingElement::generator(self.ring, &name),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(Error::Parse {
                pos,
                msg: "expected a number, generator, or parenthesized expression".into(),
            }),
        }
    }
}

/// Parses a coefficient expression into a canonical [`RingElement`].
pub fn parse_coeff(text: &str, ring: &Arc<GradedRing>) -> Result<RingElement> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser {
        toks,
        idx: 0,
        ring,
        end: text.len(),
    };
    let out = p.expr()?;
    if p.idx != p.toks.len() {
        return Err(Error::Parse {
            pos: p.pos(),
            msg: "trailing input".into(),
        });
    }
    Ok(out)
}
