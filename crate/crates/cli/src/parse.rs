//! Recursive-descent parsers for the polynomial and Witt-vector expression
//! languages.  All errors carry a 1-based source column.

use heights_core::field::{Field, FieldElement};
use heights_core::laurent::LaurentPoly;
use std::fmt;

pub const MAX_EXPONENT: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at column {}: {}", self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        col,
        msg: msg.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokKind {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

#[derive(Debug, Clone)]
struct Tok {
    kind: TokKind,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Tok>, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' => {
                toks.push(Tok { kind: TokKind::Plus, col });
                i += 1;
            }
            '-' => {
                toks.push(Tok { kind: TokKind::Minus, col });
                i += 1;
            }
            '*' => {
                toks.push(Tok { kind: TokKind::Star, col });
                i += 1;
            }
            '^' => {
                toks.push(Tok { kind: TokKind::Caret, col });
                i += 1;
            }
            '(' => {
                toks.push(Tok { kind: TokKind::LParen, col });
                i += 1;
            }
            ')' => {
                toks.push(Tok { kind: TokKind::RParen, col });
                i += 1;
            }
            '[' => {
                toks.push(Tok { kind: TokKind::LBracket, col });
                i += 1;
            }
            ']' => {
                toks.push(Tok { kind: TokKind::RBracket, col });
                i += 1;
            }
            ',' => {
                toks.push(Tok { kind: TokKind::Comma, col });
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                match text.parse::<i64>() {
                    Ok(v) => toks.push(Tok { kind: TokKind::Int(v), col }),
                    Err(_) => return err(col, format!("integer literal {text} overflows")),
                }
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                toks.push(Tok { kind: TokKind::Ident(name), col });
            }
            other => return err(col, format!("unexpected character '{other}'")),
        }
    }
    toks.push(Tok {
        kind: TokKind::End,
        col: chars.len() + 1,
    });
    Ok(toks)
}

/// A parsed polynomial along with its source text and field.
#[derive(Debug, Clone)]
pub struct PolyExpr {
    pub source: String,
    pub poly: LaurentPoly,
    pub p: u64,
    pub d: usize,
}

struct PolyParser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    field: &'a Field,
    arity: usize,
}

impl<'a> PolyParser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().kind {
                TokKind::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?, self.field);
                }
                TokKind::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?, self.field);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.unary()?;
        while self.peek().kind == TokKind::Star {
            self.bump();
            acc = acc.mul(&self.unary()?, self.field);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<LaurentPoly, ParseError> {
        if self.peek().kind == TokKind::Minus {
            self.bump();
            return Ok(self.unary()?.neg(self.field));
        }
        self.power()
    }

    fn power(&mut self) -> Result<LaurentPoly, ParseError> {
        let base = self.atom()?;
        if self.peek().kind != TokKind::Caret {
            return Ok(base);
        }
        self.bump();
        let tok = self.bump();
        match tok.kind {
            TokKind::Int(e) if (0..=MAX_EXPONENT).contains(&e) => {
                Ok(base.pow(e as u64, self.field))
            }
            TokKind::Int(e) => err(tok.col, format!("exponent {e} out of range")),
            _ => err(tok.col, "expected a nonnegative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<LaurentPoly, ParseError> {
        let tok = self.bump();
        match tok.kind {
            TokKind::Int(v) => Ok(LaurentPoly::constant(
                self.arity,
                self.field.from_int(v),
                self.field,
            )),
            TokKind::Ident(name) => self.variable(&name, tok.col),
            TokKind::LParen => {
                let inner = self.expr()?;
                let close = self.bump();
                if close.kind != TokKind::RParen {
                    return err(close.col, "expected ')'");
                }
                Ok(inner)
            }
            TokKind::End => err(tok.col, "unexpected end of input"),
            _ => err(tok.col, "expected a variable, number, or '('"),
        }
    }

    fn variable(&mut self, name: &str, col: usize) -> Result<LaurentPoly, ParseError> {
        if name == "t" {
            if self.field.d() < 2 {
                return err(col, "'t' requires an extension field (d >= 2)");
            }
            return Ok(LaurentPoly::constant(
                self.arity,
                self.field.gen(),
                self.field,
            ));
        }
        if let Some(rest) = name.strip_prefix('x') {
            if let Ok(idx) = rest.parse::<usize>() {
                if rest.len() == 1 {
                    if idx < self.arity {
                        return Ok(LaurentPoly::var(self.arity, idx, self.field));
                    }
                    return err(col, format!("variable x{idx} exceeds the supported arity"));
                }
            }
        }
        err(col, format!("unknown variable '{name}'"))
    }
}

/// Determines the arity (1 + max variable index) by scanning the tokens.
fn scan_arity(toks: &[Tok]) -> Result<usize, ParseError> {
    let mut max_idx: Option<usize> = None;
    for tok in toks {
        if let TokKind::Ident(name) = &tok.kind {
            if let Some(rest) = name.strip_prefix('x') {
                if rest.len() == 1 {
                    if let Ok(idx) = rest.parse::<usize>() {
                        if idx > 5 {
                            return err(
                                tok.col,
                                format!("variable x{idx} exceeds the supported arity (x0..x5)"),
                            );
                        }
                        max_idx = Some(max_idx.map_or(idx, |m| m.max(idx)));
                    }
                }
            }
        }
    }
    Ok(max_idx.map_or(1, |m| m + 1))
}

/// Parses a polynomial in `x0..x5` (and the field generator `t`).
pub fn parse_poly(text: &str, field: &Field) -> Result<PolyExpr, ParseError> {
    if text.trim().is_empty() {
        return err(1, "empty input");
    }
    let toks = lex(text)?;
    let arity = scan_arity(&toks)?;
    let mut parser = PolyParser {
        toks,
        pos: 0,
        field,
        arity,
    };
    let poly = parser.expr()?;
    let end = parser.bump();
    if end.kind != TokKind::End {
        return err(end.col, "trailing input");
    }
    Ok(PolyExpr {
        source: text.to_string(),
        poly,
        p: field.p(),
        d: field.d(),
    })
}

/// A Witt-vector expression: vector literals `[a0,a1,...]` (entries are
/// scalar expressions in integers and `t`), integers, `+`, `-`, `*`, parens.
#[derive(Debug, Clone)]
pub enum WittExpr {
    Literal(Vec<FieldElement>),
    Int(i64),
    Neg(Box<WittExpr>),
    Add(Box<WittExpr>, Box<WittExpr>),
    Sub(Box<WittExpr>, Box<WittExpr>),
    Mul(Box<WittExpr>, Box<WittExpr>),
}

struct WittParser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    field: &'a Field,
}

impl<'a> WittParser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<WittExpr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().kind {
                TokKind::Plus => {
                    self.bump();
                    acc = WittExpr::Add(Box::new(acc), Box::new(self.term()?));
                }
                TokKind::Minus => {
                    self.bump();
                    acc = WittExpr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<WittExpr, ParseError> {
        let mut acc = self.unary()?;
        while self.peek().kind == TokKind::Star {
            self.bump();
            acc = WittExpr::Mul(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<WittExpr, ParseError> {
        if self.peek().kind == TokKind::Minus {
            self.bump();
            return Ok(WittExpr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<WittExpr, ParseError> {
        let tok = self.bump();
        match tok.kind {
            TokKind::Int(v) => Ok(WittExpr::Int(v)),
            TokKind::LParen => {
                let inner = self.expr()?;
                let close = self.bump();
                if close.kind != TokKind::RParen {
                    return err(close.col, "expected ')'");
                }
                Ok(inner)
            }
            TokKind::LBracket => self.literal(),
            TokKind::End => err(tok.col, "unexpected end of input"),
            _ => err(tok.col, "expected a vector literal, number, or '('"),
        }
    }

    fn literal(&mut self) -> Result<WittExpr, ParseError> {
        let mut entries = Vec::new();
        loop {
            entries.push(self.scalar()?);
            let tok = self.bump();
            match tok.kind {
                TokKind::Comma => continue,
                TokKind::RBracket => return Ok(WittExpr::Literal(entries)),
                _ => return err(tok.col, "expected ',' or ']'"),
            }
        }
    }

    /// A scalar entry: the polynomial grammar restricted to constants.
    fn scalar(&mut self) -> Result<FieldElement, ParseError> {
        let start = self.pos;
        let mut depth = 0usize;
        loop {
            match &self.toks[self.pos].kind {
                TokKind::LParen => {
                    depth += 1;
                    self.pos += 1;
                }
                TokKind::RParen if depth > 0 => {
                    depth -= 1;
                    self.pos += 1;
                }
                TokKind::Comma | TokKind::RBracket if depth == 0 => break,
                TokKind::End => return err(self.toks[self.pos].col, "unterminated vector literal"),
                _ => self.pos += 1,
            }
        }
        let mut sub: Vec<Tok> = self.toks[start..self.pos].to_vec();
        if sub.is_empty() {
            return err(self.toks[self.pos].col, "empty vector entry");
        }
        let end_col = self.toks[self.pos].col;
        sub.push(Tok {
            kind: TokKind::End,
            col: end_col,
        });
        let mut inner = PolyParser {
            toks: sub,
            pos: 0,
            field: self.field,
            arity: 0,
        };
        let poly = inner.expr()?;
        let done = inner.bump();
        if done.kind != TokKind::End {
            return err(done.col, "trailing input in vector entry");
        }
        poly.coefficient(&[])
            .map_err(|_| ParseError {
                col: self.toks[start].col,
                msg: "vector entries must be scalars".to_string(),
            })
    }
}

/// Parses a Witt-vector expression.
pub fn parse_witt_expr(text: &str, field: &Field) -> Result<WittExpr, ParseError> {
    if text.trim().is_empty() {
        return err(1, "empty input");
    }
    let toks = lex(text)?;
    let mut parser = WittParser {
        toks,
        pos: 0,
        field,
    };
    let expr = parser.expr()?;
    let end = parser.bump();
    if end.kind != TokKind::End {
        return err(end.col, "trailing input");
    }
    Ok(expr)
}
