use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::{Polynomial, Rational, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unsupported operator `{op}` at offset {pos}")]
    UnsupportedOperator { pos: usize, op: String },
}

impl ParseError {
    pub fn syntax(pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos, msg: msg.into() }
    }

    pub fn pos(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::UnsupportedOperator { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Prime,
    Eq,
    Ne,
    Ge,
    Gt,
    Le,
    Lt,
    Bang,
    And,
    Or,
    Implies,
    Iff,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let peek = |k: usize| chars.get(i + k).map(|p| p.1);
        let (kind, len) = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let end = chars.get(j).map(|p| p.0).unwrap_or(text.len());
                let n: BigInt = text[pos..end].parse().expect("digit run parses");
                (TokenKind::Num(n), j - i)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_') {
                    j += 1;
                }
                let end = chars.get(j).map(|p| p.0).unwrap_or(text.len());
                (TokenKind::Ident(text[pos..end].to_string()), j - i)
            }
            '+' => (TokenKind::Plus, 1),
            '-' if peek(1) == Some('>') => (TokenKind::Implies, 2),
            '-' => (TokenKind::Minus, 1),
            '*' => (TokenKind::Star, 1),
            '/' => (TokenKind::Slash, 1),
            '^' => (TokenKind::Caret, 1),
            '(' => (TokenKind::LParen, 1),
            ')' => (TokenKind::RParen, 1),
            '{' => (TokenKind::LBrace, 1),
            '}' => (TokenKind::RBrace, 1),
            ',' => (TokenKind::Comma, 1),
            '\'' => (TokenKind::Prime, 1),
            '=' if peek(1) == Some('=') => (TokenKind::Eq, 2),
            '=' => (TokenKind::Eq, 1),
            '!' if peek(1) == Some('=') => (TokenKind::Ne, 2),
            '!' | '¬' => (TokenKind::Bang, 1),
            '>' if peek(1) == Some('=') => (TokenKind::Ge, 2),
            '>' => (TokenKind::Gt, 1),
            '<' if peek(1) == Some('-') && peek(2) == Some('>') => (TokenKind::Iff, 3),
            '<' if peek(1) == Some('=') => (TokenKind::Le, 2),
            '<' => (TokenKind::Lt, 1),
            '&' if peek(1) == Some('&') => (TokenKind::And, 2),
            '&' | '∧' => (TokenKind::And, 1),
            '|' if peek(1) == Some('|') => (TokenKind::Or, 2),
            '|' | '∨' => (TokenKind::Or, 1),
            '≥' => (TokenKind::Ge, 1),
            '≤' => (TokenKind::Le, 1),
            '≠' => (TokenKind::Ne, 1),
            '→' => (TokenKind::Implies, 1),
            '↔' => (TokenKind::Iff, 1),
            '−' => (TokenKind::Minus, 1),
            '·' => (TokenKind::Star, 1),
            other => return Err(ParseError::syntax(pos, format!("unexpected character `{other}`"))),
        };
        out.push(Token { kind, pos });
        i += len;
    }
    Ok(out)
}

/// Recursive-descent parser over a token stream. Term rules live here,
/// formula rules are added by the formulas module.
pub struct Parser {
    tokens: Vec<Token>,
    pub(crate) cursor: usize,
    end: usize,
}

impl Parser {
    pub fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser { tokens: tokenize(text)?, cursor: 0, end: text.len() })
    }

    pub fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.cursor).map(|t| &t.kind)
    }

    pub fn peek_at(&self, k: usize) -> Option<&TokenKind> {
        self.tokens.get(self.cursor + k).map(|t| &t.kind)
    }

    pub(crate) fn kind_at(&self, i: usize) -> Option<&TokenKind> {
        self.tokens.get(i).map(|t| &t.kind)
    }

    /// Whether the token after the cursor starts right where `len` bytes
    /// from the current token end.
    pub(crate) fn glued(&self, k: usize, len: usize) -> bool {
        match (self.tokens.get(self.cursor + k), self.tokens.get(self.cursor + k + 1)) {
            (Some(a), Some(b)) => a.pos + len == b.pos,
            _ => false,
        }
    }

    pub fn pos(&self) -> usize {
        self.tokens.get(self.cursor).map(|t| t.pos).unwrap_or(self.end)
    }

    pub fn at_end(&self) -> bool {
        self.cursor >= self.tokens.len()
    }

    pub fn bump(&mut self) -> Option<TokenKind> {
        let t = self.tokens.get(self.cursor).map(|t| t.kind.clone());
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.cursor += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, kind: &TokenKind, what: &str) -> Result<(), ParseError> {
        if self.eat(kind) {
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    pub fn eat_keyword(&mut self, word: &str) -> bool {
        if matches!(self.peek(), Some(TokenKind::Ident(s)) if s == word) {
            self.cursor += 1;
            true
        } else {
            false
        }
    }

    pub fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(TokenKind::Ident(s)) => {
                let s = s.clone();
                self.cursor += 1;
                Ok(s)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    pub fn unexpected(&self, what: &str) -> ParseError {
        match self.tokens.get(self.cursor) {
            Some(t) => ParseError::syntax(t.pos, format!("expected {what}, found {:?}", t.kind)),
            None => ParseError::syntax(self.end, format!("expected {what}, found end of input")),
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    /// term := product (('+' | '-') product)*
    pub fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.product()?;
        loop {
            if self.eat(&TokenKind::Plus) {
                acc = acc + self.product()?;
            } else if self.eat(&TokenKind::Minus) {
                acc = acc - self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&TokenKind::Star) {
                let pos = self.pos();
                let rhs = self.unary()?;
                acc = acc.checked_mul(&rhs).map_err(|e| ParseError::syntax(pos, e.to_string()))?;
            } else if self.peek() == Some(&TokenKind::Slash) {
                let pos = self.pos();
                self.cursor += 1;
                let rhs = self.unary()?;
                let c: Rational = match rhs.constant_value() {
                    Some(c) => c,
                    None => return Err(ParseError::UnsupportedOperator { pos, op: "/".into() }),
                };
                if c.is_zero() {
                    return Err(ParseError::syntax(pos, "division by zero"));
                }
                acc = acc.scale(&(Rational::from_integer(1.into()) / c));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if self.eat(&TokenKind::Minus) {
            return Ok(-self.unary()?);
        }
        if self.eat(&TokenKind::Plus) {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.eat(&TokenKind::Caret) {
            let pos = self.pos();
            let e = match self.bump() {
                Some(TokenKind::Num(n)) => n
                    .to_u32()
                    .ok_or_else(|| ParseError::syntax(pos, "exponent too large"))?,
                Some(TokenKind::Minus) => {
                    return Err(ParseError::UnsupportedOperator { pos, op: "negative exponent".into() })
                }
                _ => return Err(ParseError::syntax(pos, "expected natural exponent")),
            };
            return base.pow(e).map_err(|err| ParseError::syntax(pos, err.to_string()));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(TokenKind::Num(n)) => Ok(Polynomial::constant(Rational::from_integer(n))),
            Some(TokenKind::Ident(s)) => Ok(Polynomial::var(Var::new(&s))),
            Some(TokenKind::LParen) => {
                let t = self.term()?;
                self.expect(&TokenKind::RParen, "`)`")?;
                Ok(t)
            }
            Some(_) => {
                self.cursor -= 1;
                Err(self.unexpected("number, identifier or `(`"))
            }
            None => Err(ParseError::syntax(pos, "unexpected end of input")),
        }
    }
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}
