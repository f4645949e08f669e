//! A small expression language for operators.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := power ('*' power)*
//! power  := atom ('^' INT)?
//! atom   := '(' expr ')' | INT ['/' INT] | R0 | I | D | Mz | Id
//!         | adj '(' expr ',' space ',' INT ')'
//!         | (Ep | Vp | Thetap | Lambdap) '(' INT ')'
//! ```
//!
//! `*` is composition (`A*B` applies `B` first) and an integer literal stands
//! for a multiple of the identity.

use num_traits::One;

use super::{adjoint_generic, adjoint_of, diag_unitary, int, ratio, BaseOp, LinearOp, Rat, UnitaryKind};
use crate::coeffspace::{KernelSpec, Space};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
            }
            out.push(Tok::Int(s.parse().map_err(|_| Error::Parse(format!("integer `{s}` too large")))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
            }
            out.push(Tok::Ident(s));
        } else if "()+-*^,/".contains(c) {
            out.push(Tok::Sym(c));
            chars.next();
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{c}` at token {}", self.pos)))
        }
    }

    fn int(&mut self) -> Result<u64> {
        match self.next() {
            Some(Tok::Int(v)) => Ok(v),
            _ => Err(Error::Parse(format!("expected integer at token {}", self.pos - 1))),
        }
    }

    fn small_int(&mut self) -> Result<u32> {
        let v = self.int()?;
        u32::try_from(v).map_err(|_| Error::Parse(format!("integer {v} too large")))
    }

    fn ident(&mut self) -> Result<String> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => Err(Error::Parse(format!("expected name at token {}", self.pos - 1))),
        }
    }

    fn expr(&mut self) -> Result<LinearOp> {
        let neg = self.eat('-');
        let mut acc = self.term()?;
        if neg {
            acc = acc.scaled(&-Rat::one());
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LinearOp> {
        let mut acc = self.power()?;
        while self.eat('*') {
            acc = acc.compose(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<LinearOp> {
        let base = self.atom()?;
        if self.eat('^') {
            let k = self.small_int()?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<LinearOp> {
        match self.next() {
            Some(Tok::Sym('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Int(n)) => {
                let n = i64::try_from(n).map_err(|_| Error::Parse("integer too large".into()))?;
                let c = if self.eat('/') {
                    let d = i64::try_from(self.int()?).map_err(|_| Error::Parse("integer too large".into()))?;
                    if d == 0 {
                        return Err(Error::Parse("division by zero".into()));
                    }
                    ratio(n, d)
                } else {
                    int(n)
                };
                Ok(LinearOp::identity().scaled(&c))
            }
            Some(Tok::Ident(name)) => self.named(&name),
            other => Err(Error::Parse(format!("unexpected {other:?}"))),
        }
    }

    fn named(&mut self, name: &str) -> Result<LinearOp> {
        if name == "Id" {
            return Ok(LinearOp::identity());
        }
        if let Ok(op) = name.parse::<BaseOp>() {
            return Ok(op.op().into());
        }
        if let Ok(kind) = name.parse::<UnitaryKind>() {
            self.expect('(')?;
            let p = self.small_int()?;
            self.expect(')')?;
            return Ok(diag_unitary(kind, p).to_shift().into());
        }
        if name == "adj" {
            self.expect('(')?;
            let start = self.pos;
            let inner = self.expr()?;
            let bare = match &self.toks[start..self.pos] {
                [Tok::Ident(s)] => s.parse::<BaseOp>().ok(),
                _ => None,
            };
            self.expect(',')?;
            let space: Space = self.ident()?.parse()?;
            self.expect(',')?;
            let p = self.small_int()?;
            self.expect(')')?;
            let spec = KernelSpec::new(space, p);
            if let Some(op) = bare {
                return Ok(adjoint_of(op, spec).into());
            }
            return Ok(inner
                .terms()
                .map(|t| LinearOp::from(adjoint_generic(t, spec)))
                .fold(LinearOp::zero(), |a, b| a.add(&b)));
        }
        Err(Error::Parse(format!("unknown name `{name}`")))
    }
}

/// Parses and evaluates an operator expression.
pub fn parse(src: &str) -> Result<LinearOp> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    if p.toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(e)
}
