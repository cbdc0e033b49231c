//! Operator expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := NUMBER | IMAG | 'i' | generator | '(' expr ')'
//! generator := ('H' | 'd' | '∂' | 'int' | '∫' | 'x') slot?
//!            | 'e' '[' INT ',' INT ']' slot?
//! slot   := '_' INT
//! ```
//!
//! Numbers are `p` or `p/q`; a trailing `i` makes them imaginary (`3/2i`).
//! The slot may be omitted when the arity is 1.

use std::fmt;

use intdiff_core::operator::{Expr, Generator};
use intdiff_core::{Operator, OperatorError, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(Scalar),
    Ident(String),
    Int(u64),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Underscore,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(_) | Tok::Int(_) => "number".into(),
            Tok::Ident(s) => format!("`{}`", s),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Underscore => "`_`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

/// A syntax error with its 1-based position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub span: Span,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col_start = before.rfind('\n').map_or(0, |k| k + 1);
    (line, before[col_start..].chars().count() + 1)
}

fn error(text: &str, span: Span, message: impl Into<String>, expected: &[&str]) -> ParseError {
    let (line, column) = position(text, span.start);
    ParseError {
        line,
        column,
        span,
        message: message.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let end_of = |k: usize| chars.get(k).map_or(text.len(), |c| c.0);
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (start, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' | '·' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '_' => Some(Tok::Underscore),
            '∂' => Some(Tok::Ident("d".into())),
            '∫' => Some(Tok::Ident("int".into())),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, Span { start, end: end_of(k + 1) }));
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = k;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let int_end = j;
            let mut is_frac = false;
            if j + 1 < chars.len() && chars[j].1 == '/' && chars[j + 1].1.is_ascii_digit() {
                is_frac = true;
                j += 1;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
            }
            let literal = &text[start..end_of(j)];
            let imag = j < chars.len()
                && chars[j].1 == 'i'
                && !chars
                    .get(j + 1)
                    .is_some_and(|c| c.1.is_alphanumeric() || c.1 == '_');
            let span = Span {
                start,
                end: end_of(if imag { j + 1 } else { j }),
            };
            let value: Scalar = literal
                .parse()
                .map_err(|_| error(text, span, "malformed number", &[]))?;
            if value.is_zero() && is_frac && literal.ends_with("/0") {
                return Err(error(text, span, "zero denominator", &[]));
            }
            let tok = if imag {
                Tok::Num(&value * &Scalar::i())
            } else if !is_frac {
                let digits = &text[start..end_of(int_end)];
                match digits.parse::<u64>() {
                    Ok(v) => Tok::Int(v),
                    Err(_) => Tok::Num(value),
                }
            } else {
                Tok::Num(value)
            };
            out.push((tok, span));
            k = if imag { j + 1 } else { j };
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut j = k;
            while j < chars.len() && chars[j].1.is_ascii_alphabetic() {
                j += 1;
            }
            out.push((
                Tok::Ident(text[start..end_of(j)].to_string()),
                Span { start, end: end_of(j) },
            ));
            k = j;
            continue;
        }
        let span = Span { start, end: end_of(k + 1) };
        return Err(error(text, span, format!("unexpected character `{}`", c), &[]));
    }
    out.push((
        Tok::Eof,
        Span {
            start: text.len(),
            end: text.len(),
        },
    ));
    Ok(out)
}

/// Parsed expression with source spans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub kind: NodeKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Scalar(Scalar),
    Gen { gen: Generator, slot: usize },
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, u32),
}

impl Node {
    pub fn to_expr(&self) -> Expr {
        match &self.kind {
            NodeKind::Scalar(c) => Expr::Scalar(c.clone()),
            NodeKind::Gen { gen, slot } => Expr::gen(*gen, *slot),
            NodeKind::Add(a, b) => Expr::Add(Box::new(a.to_expr()), Box::new(b.to_expr())),
            NodeKind::Sub(a, b) => Expr::Sub(Box::new(a.to_expr()), Box::new(b.to_expr())),
            NodeKind::Mul(a, b) => Expr::Mul(Box::new(a.to_expr()), Box::new(b.to_expr())),
            NodeKind::Neg(a) => Expr::Neg(Box::new(a.to_expr())),
            NodeKind::Pow(a, e) => Expr::Pow(Box::new(a.to_expr()), *e as i64),
        }
    }
}

const ATOM_START: &[&str] = &["number", "`i`", "generator", "`(`", "`-`"];

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, Span)>,
    pos: usize,
    arity: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &(Tok, Span) {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let (t, span) = self.peek();
        error(
            self.text,
            *span,
            format!("unexpected {}", t.describe()),
            expected,
        )
    }

    fn expect(&mut self, want: Tok, name: &str) -> Result<Span, ParseError> {
        if self.peek().0 == want {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&[name]))
        }
    }

    fn int(&mut self) -> Result<(u64, Span), ParseError> {
        match self.peek().clone() {
            (Tok::Int(v), span) => {
                self.bump();
                Ok((v, span))
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().0 {
                Tok::Plus => Tok::Plus,
                Tok::Minus => Tok::Minus,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = Span {
                start: lhs.span.start,
                end: rhs.span.end,
            };
            let kind = if op == Tok::Plus {
                NodeKind::Add(Box::new(lhs), Box::new(rhs))
            } else {
                NodeKind::Sub(Box::new(lhs), Box::new(rhs))
            };
            lhs = Node { kind, span };
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek().0 == Tok::Star {
            self.bump();
            let rhs = self.unary()?;
            let span = Span {
                start: lhs.span.start,
                end: rhs.span.end,
            };
            lhs = Node {
                kind: NodeKind::Mul(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.peek().0 == Tok::Minus {
            let start = self.bump().1.start;
            let inner = self.unary()?;
            let span = Span {
                start,
                end: inner.span.end,
            };
            return Ok(Node {
                kind: NodeKind::Neg(Box::new(inner)),
                span,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if self.peek().0 != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        if self.peek().0 == Tok::Minus {
            let span = self.peek().1;
            return Err(error(self.text, span, "negative powers are not allowed", &[]));
        }
        let (e, espan) = self.int()?;
        let e = u32::try_from(e)
            .map_err(|_| error(self.text, espan, "exponent too large", &[]))?;
        let span = Span {
            start: base.span.start,
            end: espan.end,
        };
        Ok(Node {
            kind: NodeKind::Pow(Box::new(base), e),
            span,
        })
    }

    fn slot(&mut self, name_span: Span) -> Result<(usize, Span), ParseError> {
        if self.peek().0 != Tok::Underscore {
            if self.arity == 1 {
                return Ok((0, name_span));
            }
            return Err(self.unexpected(&["`_`"]));
        }
        self.bump();
        let (k, span) = self.int()?;
        if k == 0 || k as usize > self.arity {
            return Err(error(
                self.text,
                span,
                format!("slot {} out of range 1..{}", k, self.arity),
                &[],
            ));
        }
        Ok((k as usize - 1, span))
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let (tok, span) = self.peek().clone();
        match tok {
            Tok::Num(c) => {
                self.bump();
                Ok(Node {
                    kind: NodeKind::Scalar(c),
                    span,
                })
            }
            Tok::Int(v) => {
                self.bump();
                let c: Scalar = v.to_string().parse().expect("integer literal");
                Ok(Node {
                    kind: NodeKind::Scalar(c),
                    span,
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                let close = self.expect(Tok::RParen, "`)`")?;
                Ok(Node {
                    kind: inner.kind,
                    span: Span {
                        start: span.start,
                        end: close.end,
                    },
                })
            }
            Tok::Ident(name) => {
                self.bump();
                let gen = match name.as_str() {
                    "i" => {
                        return Ok(Node {
                            kind: NodeKind::Scalar(Scalar::i()),
                            span,
                        })
                    }
                    "H" => Generator::H,
                    "d" => Generator::D,
                    "int" => Generator::Int,
                    "x" => Generator::X,
                    "e" => {
                        self.expect(Tok::LBracket, "`[`")?;
                        let (s, sspan) = self.int()?;
                        self.expect(Tok::Comma, "`,`")?;
                        let (t, tspan) = self.int()?;
                        self.expect(Tok::RBracket, "`]`")?;
                        let too_big = |sp| error(self.text, sp, "index too large", &[]);
                        let s = u32::try_from(s).map_err(|_| too_big(sspan))?;
                        let t = u32::try_from(t).map_err(|_| too_big(tspan))?;
                        Generator::E { s, t }
                    }
                    _ => {
                        return Err(error(
                            self.text,
                            span,
                            format!("unknown symbol `{}`", name),
                            &["`H`", "`d`", "`int`", "`x`", "`e`", "`i`"],
                        ))
                    }
                };
                let prev = self.toks[self.pos.saturating_sub(1)].1;
                let (slot, end) = self.slot(prev)?;
                Ok(Node {
                    kind: NodeKind::Gen { gen, slot },
                    span: Span {
                        start: span.start,
                        end: end.end,
                    },
                })
            }
            _ => Err(self.unexpected(ATOM_START)),
        }
    }
}

/// Parses one expression over `arity` slots.
pub fn parse_expression(text: &str, arity: usize) -> Result<Node, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        text,
        toks,
        pos: 0,
        arity,
    };
    let node = p.expr()?;
    if p.peek().0 != Tok::Eof {
        return Err(p.unexpected(&["`+`", "`-`", "`*`", "`^`", "end of input"]));
    }
    Ok(node)
}

/// Errors from turning text into an operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprError {
    Parse(ParseError),
    Operator(OperatorError),
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Parse(e) => e.fmt(f),
            ExprError::Operator(e) => e.fmt(f),
        }
    }
}

/// Parses and normalizes.
pub fn parse_operator(text: &str, arity: usize) -> Result<Operator, ExprError> {
    let node = parse_expression(text, arity).map_err(ExprError::Parse)?;
    Operator::from_expression(&node.to_expr(), arity).map_err(ExprError::Operator)
}
