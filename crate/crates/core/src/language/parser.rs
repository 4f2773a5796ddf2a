//! Recursive-descent parser for the formula grammar:
//!
//! ```text
//! formula := atom | "not" formula | "(" formula op formula ")"
//!          | ("exists" | "forall") ident "." formula
//! op      := "and" | "or" | "->" | "<->"
//! atom    := ident "(" ident ("," ident)* ")"
//! ```
//!
//! A parenthesized lone formula `"(" formula ")"` is accepted as grouping.

use super::ast::{Formula, Term};
use super::Signature;
use crate::error::{Error, Result};

const MAX_NESTING: usize = 512;

pub(crate) const KEYWORDS: [&str; 5] = ["not", "and", "or", "exists", "forall"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    LParen,
    RParen,
    Comma,
    Dot,
    Arrow,
    DoubleArrow,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(usize, Tok<'a>)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'-' if bytes.get(start + 1) == Some(&b'>') => {
                self.pos += 1;
                Tok::Arrow
            }
            b'<' if bytes.get(start + 1) == Some(&b'-') && bytes.get(start + 2) == Some(&b'>') => {
                self.pos += 2;
                Tok::DoubleArrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = start + 1;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                    end += 1;
                }
                self.pos = end;
                return Ok((start, Tok::Ident(&self.src[start..end])));
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap_or('?');
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        };
        self.pos += 1;
        Ok((start, tok))
    }
}

struct Parser<'a, 's> {
    lexer: Lexer<'a>,
    nesting: usize,
    sig: &'s Signature,
    scope: Vec<&'a str>,
}

impl<'a> Parser<'a, '_> {
    fn bump(&mut self) -> Result<(usize, Tok<'a>)> {
        self.lexer.next()
    }

    fn expect(&mut self, want: Tok<'static>, what: &str) -> Result<usize> {
        let (pos, tok) = self.bump()?;
        if tok == want {
            Ok(pos)
        } else {
            Err(unexpected(pos, &tok, what))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.bump()? {
            (pos, Tok::Ident(s)) if !KEYWORDS.contains(&s) => Ok((pos, s)),
            (pos, tok) => Err(unexpected(pos, &tok, what)),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let (pos, tok) = self.bump()?;
        if self.nesting >= MAX_NESTING {
            return Err(Error::Parse {
                pos,
                msg: format!("formula nested deeper than {MAX_NESTING}"),
            });
        }
        self.nesting += 1;
        let out = self.formula_at(pos, tok);
        self.nesting -= 1;
        out
    }

    fn formula_at(&mut self, pos: usize, tok: Tok<'a>) -> Result<Formula> {
        match tok {
            Tok::Ident("not") => Ok(Formula::not(self.formula()?)),
            Tok::Ident(q @ ("exists" | "forall")) => {
                let (_, var) = self.ident("a variable")?;
                self.expect(Tok::Dot, "`.`")?;
                self.scope.push(var);
                let body = self.formula();
                self.scope.pop();
                let body = body?;
                Ok(if q == "exists" {
                    Formula::exists(var, body)
                } else {
                    Formula::forall(var, body)
                })
            }
            Tok::Ident(rel) if !KEYWORDS.contains(&rel) => self.atom(rel),
            Tok::LParen => {
                let lhs = self.formula()?;
                let (op_pos, op) = self.bump()?;
                let ctor: fn(Formula, Formula) -> Formula = match op {
                    Tok::RParen => return Ok(lhs),
                    Tok::Ident("and") => Formula::and,
                    Tok::Ident("or") => Formula::or,
                    Tok::Arrow => Formula::implies,
                    Tok::DoubleArrow => Formula::iff,
                    other => return Err(unexpected(op_pos, &other, "a binary connective")),
                };
                let rhs = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ctor(lhs, rhs))
            }
            other => Err(unexpected(pos, &other, "a formula")),
        }
    }

    fn atom(&mut self, rel: &'a str) -> Result<Formula> {
        let arity = self
            .sig
            .arity(rel)
            .ok_or_else(|| Error::UnknownRelation(rel.to_string()))?;
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        loop {
            let (_, id) = self.ident("an argument")?;
            args.push(self.resolve(id)?);
            let (p, tok) = self.bump()?;
            match tok {
                Tok::Comma => continue,
                Tok::RParen => break,
                other => return Err(unexpected(p, &other, "`,` or `)`")),
            }
        }
        if args.len() != arity {
            return Err(Error::Arity {
                rel: rel.to_string(),
                expected: arity,
                found: args.len(),
            });
        }
        Ok(Formula::atom(rel, args))
    }

    fn resolve(&self, id: &str) -> Result<Term> {
        if self.scope.contains(&id) {
            Ok(Term::Var(id.to_string()))
        } else if self.sig.name_index(id).is_some() {
            Ok(Term::Name(id.to_string()))
        } else {
            Err(Error::UnboundVariable(id.to_string()))
        }
    }
}

fn unexpected(pos: usize, tok: &Tok<'_>, what: &str) -> Error {
    let found = match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::DoubleArrow => "`<->`".into(),
        Tok::End => "end of input".into(),
    };
    Error::Parse {
        pos,
        msg: format!("expected {what}, found {found}"),
    }
}

/// Parses a closed formula over `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    let mut p = Parser {
        lexer: Lexer { src: text, pos: 0 },
        nesting: 0,
        sig,
        scope: Vec::new(),
    };
    let f = p.formula()?;
    match p.bump()? {
        (_, Tok::End) => Ok(f),
        (pos, tok) => Err(unexpected(pos, &tok, "end of input")),
    }
}
