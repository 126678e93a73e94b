use num_bigint::BigInt;
use thiserror::Error;

use super::ast::{Expr, ExprKind, Func, Span};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: expected {expected}, found {found}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Ident(s) => format!("name `{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Int(src[start..i].parse().expect("digits"))
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Ident(src[start..i].to_string())
        } else if b"+-*/^(),".contains(&c) {
            i += 1;
            Tok::Sym(c as char)
        } else {
            let ch = src[start..].chars().next().unwrap_or('?');
            return Err(ParseError {
                offset: start,
                expected: "an operator, name, integer or parenthesis".into(),
                found: format!("`{ch}`"),
            });
        };
        out.push((tok, Span { start, end: i }));
    }
    out.push((
        Tok::End,
        Span {
            start: src.len(),
            end: src.len(),
        },
    ));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            offset: self.span().start,
            expected: expected.to_string(),
            found: self.peek().describe(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<Span, ParseError> {
        if *self.peek() == Tok::Sym(c) {
            Ok(self.bump().1)
        } else {
            Err(self.error(&format!("`{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let make: fn(Box<Expr>, Box<Expr>) -> ExprKind = match self.peek() {
                Tok::Sym('+') => ExprKind::Add,
                Tok::Sym('-') => ExprKind::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = join(lhs.span, rhs.span);
            lhs = Expr::new(make(Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let make: fn(Box<Expr>, Box<Expr>) -> ExprKind = match self.peek() {
                Tok::Sym('*') => ExprKind::Mul,
                Tok::Sym('/') => ExprKind::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            let span = join(lhs.span, rhs.span);
            lhs = Expr::new(make(Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Sym('-') {
            let start = self.bump().1;
            let inner = self.unary()?;
            let span = join(start, inner.span);
            return Ok(Expr::new(ExprKind::Call(Func::Neg, vec![inner]), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.primary()?;
        while self.eat('^') {
            let (k, end) = self.exponent()?;
            let span = join(base.span, end);
            base = Expr::new(ExprKind::Pow(Box::new(base), k), span);
        }
        Ok(base)
    }

    /// Integer exponent: `3`, `-3`, `(3)` or `(-3)`.
    fn exponent(&mut self) -> Result<(i64, Span), ParseError> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let (k, mut span) = match self.peek().clone() {
            Tok::Int(n) => {
                let span = self.span();
                let k: i64 = i64::try_from(&n).map_err(|_| ParseError {
                    offset: span.start,
                    expected: "an exponent that fits in 64 bits".into(),
                    found: format!("integer `{n}`"),
                })?;
                self.bump();
                (k, span)
            }
            _ => return Err(self.error("an integer exponent")),
        };
        if paren {
            span = join(span, self.expect(')')?);
        }
        Ok((if neg { -k } else { k }, span))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let span = self.bump().1;
                Ok(Expr::new(ExprKind::Int(n), span))
            }
            Tok::Ident(name) => {
                let span = self.bump().1;
                if *self.peek() != Tok::Sym('(') {
                    return Ok(Expr::new(ExprKind::Name(name), span));
                }
                let func = Func::from_name(&name).ok_or(ParseError {
                    offset: span.start,
                    expected: "one of delta, dlog, dz, scale2, neg, lam, lam2".into(),
                    found: format!("function `{name}`"),
                })?;
                self.bump();
                let mut args = vec![self.expr()?];
                while self.eat(',') {
                    args.push(self.expr()?);
                }
                if args.len() != 1 {
                    return Err(ParseError {
                        offset: args[1].span.start,
                        expected: format!("`)`: {} takes one argument", func.name()),
                        found: "`,`".into(),
                    });
                }
                let end = self.expect(')')?;
                Ok(Expr::new(ExprKind::Call(func, args), join(span, end)))
            }
            Tok::Sym('(') => {
                let start = self.bump().1;
                let mut inner = self.expr()?;
                let end = self.expect(')')?;
                inner.span = join(start, end);
                Ok(inner)
            }
            _ => Err(self.error("an integer, name or `(`")),
        }
    }
}

fn join(a: Span, b: Span) -> Span {
    Span {
        start: a.start.min(b.start),
        end: a.end.max(b.end),
    }
}

/// Parses one expression; trailing input is an error.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("an operator or end of input"));
    }
    Ok(e)
}
