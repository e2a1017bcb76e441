//! Lexer and recursive-descent parser for A1-style formulas.
//!
//! Precedence, loosest first: comparisons, `&`, `+ -`, `* /`, unary `+ -`,
//! `^` (left-associative), postfix `%`.

use super::ast::{BinaryOp, CellRef, Expr, FormulaAst, RefPart, UnaryOp};
use crate::sheet::column_index;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("formula syntax error at byte {offset}: {message}")]
pub struct FormulaError {
    pub offset: usize,
    pub message: String,
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, FormulaError> {
    Err(FormulaError {
        offset,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Str(String),
    Ref(CellRef),
    Ident(String),
    Op(&'static str),
    LParen,
    RParen,
    Comma,
    Colon,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn peek_byte(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek_byte().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>, FormulaError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let start = self.pos;
            let Some(b) = self.peek_byte() else { break };
            let tok = match b {
                b'0'..=b'9' | b'.' => self.number()?,
                b'"' => self.string()?,
                b'A'..=b'Z' | b'a'..=b'z' | b'_' | b'$' => self.word()?,
                b'(' => self.single(Tok::LParen),
                b')' => self.single(Tok::RParen),
                b',' | b';' => self.single(Tok::Comma),
                b':' => self.single(Tok::Colon),
                b'+' => self.single(Tok::Op("+")),
                b'-' => self.single(Tok::Op("-")),
                b'*' => self.single(Tok::Op("*")),
                b'/' => self.single(Tok::Op("/")),
                b'^' => self.single(Tok::Op("^")),
                b'&' => self.single(Tok::Op("&")),
                b'%' => self.single(Tok::Op("%")),
                b'=' => self.single(Tok::Op("=")),
                b'<' => match self.src.as_bytes().get(self.pos + 1) {
                    Some(b'>') => self.double(Tok::Op("<>")),
                    Some(b'=') => self.double(Tok::Op("<=")),
                    _ => self.single(Tok::Op("<")),
                },
                b'>' => match self.src.as_bytes().get(self.pos + 1) {
                    Some(b'=') => self.double(Tok::Op(">=")),
                    _ => self.single(Tok::Op(">")),
                },
                _ => {
                    let ch = self.src[start..].chars().next().unwrap_or('?');
                    return err(start, format!("unexpected character {ch:?}"));
                }
            };
            out.push((start, tok));
        }
        Ok(out)
    }

    fn single(&mut self, tok: Tok) -> Tok {
        self.pos += 1;
        tok
    }

    fn double(&mut self, tok: Tok) -> Tok {
        self.pos += 2;
        tok
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.peek_byte().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        self.pos - start
    }

    fn number(&mut self) -> Result<Tok, FormulaError> {
        let start = self.pos;
        let mut count = self.digits();
        if self.peek_byte() == Some(b'.') {
            self.pos += 1;
            count += self.digits();
        }
        if count == 0 {
            return err(start, "malformed number");
        }
        if matches!(self.peek_byte(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek_byte(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                self.pos = save;
            }
        }
        let text = &self.src[start..self.pos];
        match text.parse::<f64>() {
            Ok(n) if n.is_finite() => Ok(Tok::Number(n)),
            _ => err(start, format!("malformed number {text:?}")),
        }
    }

    fn string(&mut self) -> Result<Tok, FormulaError> {
        let start = self.pos;
        self.pos += 1;
        let mut out = String::new();
        loop {
            let rest = &self.src[self.pos..];
            let Some(q) = rest.find('"') else {
                return err(start, "unterminated string");
            };
            out.push_str(&rest[..q]);
            self.pos += q + 1;
            if self.peek_byte() == Some(b'"') {
                out.push('"');
                self.pos += 1;
            } else {
                return Ok(Tok::Str(out));
            }
        }
    }

    fn word(&mut self) -> Result<Tok, FormulaError> {
        let start = self.pos;
        while self
            .peek_byte()
            .is_some_and(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'$'))
        {
            self.pos += 1;
        }
        let word = &self.src[start..self.pos];
        let save = self.pos;
        self.skip_ws();
        let called = self.peek_byte() == Some(b'(');
        self.pos = save;
        if !called {
            if let Some(r) = parse_a1_ref(word) {
                return Ok(Tok::Ref(r));
            }
        }
        if word.contains('$') {
            return err(start, format!("malformed reference {word:?}"));
        }
        Ok(Tok::Ident(word.to_string()))
    }
}

/// `[$]COL[$]ROW`, column of at most three letters.
fn parse_a1_ref(word: &str) -> Option<CellRef> {
    let bytes = word.as_bytes();
    let mut i = 0;
    let col_abs = bytes.first() == Some(&b'$');
    if col_abs {
        i += 1;
    }
    let letters_start = i;
    while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
        i += 1;
    }
    let letters = &word[letters_start..i];
    if letters.is_empty() || letters.len() > 3 {
        return None;
    }
    let row_abs = bytes.get(i) == Some(&b'$');
    if row_abs {
        i += 1;
    }
    let digits = &word[i..];
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let row: u32 = digits.parse().ok().filter(|&r| r > 0)?;
    let column = column_index(letters)?;
    let part = |abs: bool, v: u32| {
        if abs {
            RefPart::Absolute(v)
        } else {
            RefPart::Relative(v)
        }
    };
    Some(CellRef {
        column: part(col_abs, column),
        row: part(row_abs, row),
    })
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |(o, _)| *o)
    }

    fn eat_op(&mut self, ops: &[&'static str]) -> Option<&'static str> {
        match self.peek() {
            Some(Tok::Op(op)) if ops.contains(op) => {
                let op = *op;
                self.idx += 1;
                Some(op)
            }
            _ => None,
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), FormulaError> {
        if self.peek() == Some(&want) {
            self.idx += 1;
            Ok(())
        } else {
            err(self.offset(), format!("expected {what}"))
        }
    }

    fn binary_level(
        &mut self,
        ops: &[&'static str],
        next: fn(&mut Self) -> Result<FormulaAst, FormulaError>,
    ) -> Result<FormulaAst, FormulaError> {
        let mut lhs = next(self)?;
        while let Some(op) = self.eat_op(ops) {
            let rhs = next(self)?;
            lhs = Expr::Binary {
                op: binary_op(op),
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        Ok(lhs)
    }

    fn comparison(&mut self) -> Result<FormulaAst, FormulaError> {
        self.binary_level(&["=", "<>", "<", "<=", ">", ">="], Self::concat)
    }

    fn concat(&mut self) -> Result<FormulaAst, FormulaError> {
        self.binary_level(&["&"], Self::additive)
    }

    fn additive(&mut self) -> Result<FormulaAst, FormulaError> {
        self.binary_level(&["+", "-"], Self::multiplicative)
    }

    fn multiplicative(&mut self) -> Result<FormulaAst, FormulaError> {
        self.binary_level(&["*", "/"], Self::unary)
    }

    fn unary(&mut self) -> Result<FormulaAst, FormulaError> {
        match self.eat_op(&["+", "-"]) {
            Some(op) => Ok(Expr::Unary {
                op: if op == "-" {
                    UnaryOp::Neg
                } else {
                    UnaryOp::Plus
                },
                operand: Box::new(self.unary()?),
            }),
            None => self.power(),
        }
    }

    fn power(&mut self) -> Result<FormulaAst, FormulaError> {
        let mut lhs = self.postfix()?;
        while self.eat_op(&["^"]).is_some() {
            let rhs = self.exponent()?;
            lhs = Expr::Binary {
                op: BinaryOp::Pow,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        Ok(lhs)
    }

    fn exponent(&mut self) -> Result<FormulaAst, FormulaError> {
        match self.eat_op(&["+", "-"]) {
            Some(op) => Ok(Expr::Unary {
                op: if op == "-" {
                    UnaryOp::Neg
                } else {
                    UnaryOp::Plus
                },
                operand: Box::new(self.exponent()?),
            }),
            None => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<FormulaAst, FormulaError> {
        let mut e = self.primary()?;
        while self.eat_op(&["%"]).is_some() {
            e = Expr::Unary {
                op: UnaryOp::Percent,
                operand: Box::new(e),
            };
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<FormulaAst, FormulaError> {
        let at = self.offset();
        let Some(tok) = self.peek().cloned() else {
            return err(at, "unexpected end of formula");
        };
        self.idx += 1;
        match tok {
            Tok::Number(n) => Ok(Expr::Number(n)),
            Tok::Str(s) => Ok(Expr::Text(s)),
            Tok::Ref(a) => {
                if self.peek() == Some(&Tok::Colon) {
                    self.idx += 1;
                    match self.peek().cloned() {
                        Some(Tok::Ref(b)) => {
                            self.idx += 1;
                            Ok(range(a, b))
                        }
                        _ => err(self.offset(), "expected reference after ':'"),
                    }
                } else {
                    Ok(Expr::Ref(a))
                }
            }
            Tok::Ident(name) => {
                if self.peek() != Some(&Tok::LParen) {
                    return err(at, format!("unknown name {name:?}"));
                }
                self.idx += 1;
                let mut args = Vec::new();
                if self.peek() == Some(&Tok::RParen) {
                    self.idx += 1;
                } else {
                    loop {
                        args.push(self.comparison()?);
                        match self.peek() {
                            Some(Tok::Comma) => self.idx += 1,
                            Some(Tok::RParen) => {
                                self.idx += 1;
                                break;
                            }
                            _ => return err(self.offset(), "expected ',' or ')'"),
                        }
                    }
                }
                Ok(Expr::Call {
                    name: name.to_ascii_uppercase(),
                    args,
                })
            }
            Tok::LParen => {
                let inner = self.comparison()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Expr::Paren(Box::new(inner)))
            }
            other => err(at, format!("unexpected token {other:?}")),
        }
    }
}

fn binary_op(op: &str) -> BinaryOp {
    match op {
        "+" => BinaryOp::Add,
        "-" => BinaryOp::Sub,
        "*" => BinaryOp::Mul,
        "/" => BinaryOp::Div,
        "^" => BinaryOp::Pow,
        "&" => BinaryOp::Concat,
        "=" => BinaryOp::Eq,
        "<>" => BinaryOp::Ne,
        "<" => BinaryOp::Lt,
        "<=" => BinaryOp::Le,
        ">" => BinaryOp::Gt,
        ">=" => BinaryOp::Ge,
        _ => unreachable!("operator table"),
    }
}

/// Orders the corners so the top-left one comes first.
fn range(a: CellRef, b: CellRef) -> FormulaAst {
    let (c1, c2) = if a.column.index() <= b.column.index() {
        (a.column, b.column)
    } else {
        (b.column, a.column)
    };
    let (r1, r2) = if a.row.index() <= b.row.index() {
        (a.row, b.row)
    } else {
        (b.row, a.row)
    };
    Expr::Range(
        CellRef {
            column: c1,
            row: r1,
        },
        CellRef {
            column: c2,
            row: r2,
        },
    )
}

/// Parses formula text, with or without a leading `=`.
pub fn parse_formula(text: &str) -> Result<FormulaAst, FormulaError> {
    let trimmed = text.trim_start();
    let lead = text.len() - trimmed.len();
    let (body, base) = match trimmed.strip_prefix('=') {
        Some(rest) => (rest, lead + 1),
        None => (trimmed, lead),
    };
    let toks = Lexer { src: body, pos: 0 }
        .tokens()
        .map_err(|e| FormulaError {
            offset: e.offset + base,
            message: e.message,
        })?;
    if toks.is_empty() {
        return err(base, "empty formula");
    }
    let mut parser = Parser {
        toks,
        idx: 0,
        end: body.len(),
    };
    let shift = |e: FormulaError| FormulaError {
        offset: e.offset + base,
        message: e.message,
    };
    let ast = parser.comparison().map_err(shift)?;
    if parser.idx < parser.toks.len() {
        return err(parser.offset() + base, "unexpected trailing input");
    }
    Ok(ast)
}
