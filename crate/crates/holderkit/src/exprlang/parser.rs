//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    := term  (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | power
//! power   := primary ('^' power)?
//! primary := number | constant | variable | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-x^2`
//! reads as `-(x^2)` and a negative exponent must be parenthesized:
//! `x^(-0.5)`. Numbers are decimal literals with optional fraction and
//! exponent (`2`, `0.5`, `1.25e-3`); `pi` and `e` denote the usual constants.

use super::{ExprAst, Func, Var};
use crate::error::ParseError;

/// Parse a single-variable expression in `x`.
pub fn parse(src: &str) -> Result<ExprAst, ParseError> {
    Parser::new(src, false).parse_all()
}

/// Parse a two-variable expression in `x` and `w`.
pub fn parse_xw(src: &str) -> Result<ExprAst, ParseError> {
    Parser::new(src, true).parse_all()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Num(f64),
    Ident(&'a str),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    allow_w: bool,
    tok: Tok<'a>,
    tok_offset: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, allow_w: bool) -> Self {
        let mut p = Parser {
            src,
            pos: 0,
            allow_w,
            tok: Tok::Eof,
            tok_offset: 0,
        };
        // An invalid first token is reported lazily by parse_all.
        let _ = p.advance();
        p
    }

    fn parse_all(&mut self) -> Result<ExprAst, ParseError> {
        // Re-lex the first token so lexing errors surface as ParseError.
        self.pos = 0;
        self.advance()?;
        let e = self.expr()?;
        if self.tok != Tok::Eof {
            return Err(self.unexpected(&["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"]));
        }
        Ok(e)
    }

    fn error(&self, offset: usize, expected: &[&str], found: String) -> ParseError {
        ParseError {
            offset,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error(self.tok_offset, expected, self.tok.describe())
    }

    fn bump_over_ws(&mut self) {
        let rest = &self.src[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        self.bump_over_ws();
        self.tok_offset = self.pos;
        let rest = &self.src[self.pos..];
        let mut chars = rest.chars();
        let c = match chars.next() {
            None => {
                self.tok = Tok::Eof;
                return Ok(());
            }
            Some(c) => c,
        };
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            self.tok = t;
            self.pos += c.len_utf8();
            return Ok(());
        }
        if c.is_ascii_digit() || c == '.' {
            return self.lex_number(rest);
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let end = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            self.tok = Tok::Ident(&rest[..end]);
            self.pos += end;
            return Ok(());
        }
        Err(self.error(
            self.pos,
            &["number", "identifier", "operator", "parenthesis"],
            format!("character {c:?}"),
        ))
    }

    fn lex_number(&mut self, rest: &'a str) -> Result<(), ParseError> {
        let bytes = rest.as_bytes();
        let mut end = 0;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end < bytes.len() && bytes[end] == b'.' {
            end += 1;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
        }
        if end == 0 || rest[..end] == *"." {
            return Err(self.error(self.pos, &["number"], format!("{:?}", &rest[..end.max(1)])));
        }
        // An exponent part is consumed only when complete (digits after the
        // optional sign); otherwise the 'e' is left to be lexed as an
        // identifier, which the grammar will then reject.
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut cursor = end + 1;
            if cursor < bytes.len() && (bytes[cursor] == b'+' || bytes[cursor] == b'-') {
                cursor += 1;
            }
            let digits_start = cursor;
            while cursor < bytes.len() && bytes[cursor].is_ascii_digit() {
                cursor += 1;
            }
            if cursor > digits_start {
                end = cursor;
            }
        }
        let text = &rest[..end];
        let value: f64 = text.parse().map_err(|_| {
            self.error(self.pos, &["number"], format!("malformed number {text:?}"))
        })?;
        if !value.is_finite() {
            return Err(self.error(
                self.pos,
                &["finite number"],
                format!("out-of-range literal {text:?}"),
            ));
        }
        self.tok = Tok::Num(value);
        self.pos += end;
        Ok(())
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => ExprAst::Add as fn(_, _) -> _,
                Tok::Minus => ExprAst::Sub as fn(_, _) -> _,
                _ => return Ok(lhs),
            };
            self.advance()?;
            let rhs = self.term()?;
            lhs = op(Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.tok {
                Tok::Star => ExprAst::Mul as fn(_, _) -> _,
                Tok::Slash => ExprAst::Div as fn(_, _) -> _,
                _ => return Ok(lhs),
            };
            self.advance()?;
            let rhs = self.factor()?;
            lhs = op(Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<ExprAst, ParseError> {
        if self.tok == Tok::Minus {
            self.advance()?;
            return Ok(ExprAst::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.primary()?;
        if self.tok == Tok::Caret {
            self.advance()?;
            let expo = self.power()?;
            return Ok(ExprAst::Pow(Box::new(base), Box::new(expo)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<ExprAst, ParseError> {
        match self.tok {
            Tok::Num(v) => {
                self.advance()?;
                Ok(ExprAst::Num(v))
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.expr()?;
                if self.tok != Tok::RParen {
                    return Err(self.unexpected(&["')'"]));
                }
                self.advance()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let offset = self.tok_offset;
                self.advance()?;
                if let Some(f) = Func::from_name(name) {
                    if self.tok != Tok::LParen {
                        return Err(self.unexpected(&["'('"]));
                    }
                    self.advance()?;
                    let arg = self.expr()?;
                    if self.tok != Tok::RParen {
                        return Err(self.unexpected(&["')'"]));
                    }
                    self.advance()?;
                    return Ok(ExprAst::Call(f, Box::new(arg)));
                }
                match name {
                    "x" => Ok(ExprAst::Var(Var::X)),
                    "w" if self.allow_w => Ok(ExprAst::Var(Var::W)),
                    "pi" => Ok(ExprAst::Num(std::f64::consts::PI)),
                    "e" => Ok(ExprAst::Num(std::f64::consts::E)),
                    _ => {
                        let mut expected = vec!["'x'", "'pi'", "'e'", "function name"];
                        if self.allow_w {
                            expected.insert(1, "'w'");
                        }
                        Err(self.error(offset, &expected, format!("identifier '{name}'")))
                    }
                }
            }
            _ => Err(self.unexpected(&["number", "identifier", "'('", "'-'"])),
        }
    }
}
