//! Recursive-descent parser for terms and identities.
//!
//! ```text
//! identity := term '=' term
//! term     := factor ('*' factor)*
//! factor   := atom (('\' | '/') atom)*
//! atom     := var | 'e' | '1' | '(' term ')'
//! var      := [a-z][a-z0-9]*   (except the reserved `e`)
//! ```
//!
//! Both levels associate to the left, so `x/y*y` is `(x/y)*y` and `x*y/y`
//! is `x*(y/y)`.

use super::{Identity, Term};
use crate::algebra::OpSymbol;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(String),
    E,
    Unit,
    Op(OpSymbol),
    LParen,
    RParen,
    Eq,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'*' => Tok::Op(OpSymbol::Mul),
            b'\\' => Tok::Op(OpSymbol::Ldiv),
            b'/' => Tok::Op(OpSymbol::Rdiv),
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'=' => Tok::Eq,
            b'1' => Tok::Unit,
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit())
                {
                    i += 1;
                }
                let word = &text[start..i];
                out.push((
                    start,
                    if word == "e" {
                        Tok::E
                    } else {
                        Tok::Var(word.to_string())
                    },
                ));
                continue;
            }
            _ => {
                return Err(Error::Parse {
                    pos: i,
                    message: format!(
                        "unexpected character {:?}",
                        text[i..].chars().next().unwrap()
                    ),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            message: message.into(),
        })
    }

    fn term(&mut self) -> Result<Term> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Tok::Op(OpSymbol::Mul)) {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Term::op(OpSymbol::Mul, lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Term> {
        let mut lhs = self.atom()?;
        while let Some(Tok::Op(op @ (OpSymbol::Ldiv | OpSymbol::Rdiv))) = self.peek() {
            let op = *op;
            self.pos += 1;
            let rhs = self.atom()?;
            lhs = Term::op(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Term> {
        let term = match self.peek() {
            Some(Tok::Var(v)) => Term::Var(v.clone()),
            Some(Tok::E) => Term::E,
            Some(Tok::Unit) => Term::Unit,
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.term()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                return Ok(inner);
            }
            Some(t) => {
                return self.error(format!("expected a variable, constant or `(`, found {t:?}"))
            }
            None => return self.error("unexpected end of input"),
        };
        self.pos += 1;
        Ok(term)
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.error(format!("unexpected trailing {t:?}")),
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_identity(text: &str) -> Result<Identity> {
    let mut p = Parser::new(text)?;
    let lhs = p.term()?;
    if p.peek() != Some(&Tok::Eq) {
        return p.error("expected `=`");
    }
    p.pos += 1;
    let rhs = p.term()?;
    p.finish()?;
    Ok(Identity { lhs, rhs })
}

/// Parses an identity file: one identity per line, optionally prefixed by a
/// `label:`; `#` starts a comment. Unlabelled identities get their line
/// number as label.
pub fn parse_identity_file(text: &str) -> Result<Vec<(String, Identity)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (label, body) = match line.split_once(':') {
            Some((l, b)) => (l.trim().to_string(), b),
            None => ((lineno + 1).to_string(), line),
        };
        let id = parse_identity(body).map_err(|e| match e {
            Error::Parse { pos, message } => Error::Parse {
                pos,
                message: format!("line {}: {message}", lineno + 1),
            },
            other => other,
        })?;
        out.push((label, id));
    }
    Ok(out)
}
