//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := base ('^' ['-'] integer)?          right-associative
//! base   := integer | symbol | func '(' expr ')' | '(' expr ')'
//! symbol := ident ['_{' integer '.' integer '}']
//! ```
//!
//! `/` always denotes division, so a rational literal `3/2` is the quotient
//! of two integers and `2/3^2` is `2/9`. Whitespace is insignificant and `#`
//! starts a comment running to the end of the line.

use num_bigint::BigInt;
use thiserror::Error;

use super::atom::{Func, Symbol};
use super::tree::Expr;
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown function {0:?}")]
    UnknownFunction(String),
    #[error("function {0:?} used without an argument")]
    MissingArgument(String),
    #[error("exponent must be an integer literal")]
    NonIntegerExponent,
    #[error("decimal literals are not supported; write a fraction")]
    DecimalLiteral,
    #[error("malformed derivative index, expected _{{p.q}}")]
    BadIndex,
    #[error("number too large")]
    Overflow,
    #[error("name {0:?} is not allowed here")]
    ForbiddenName(String),
}

/// Which identifiers denote the two coordinates.
#[derive(Clone, Debug)]
pub struct ParseOptions<'a> {
    pub x: &'a str,
    pub y: &'a str,
    /// Identifiers rejected outright (e.g. old coordinates inside an inverse
    /// map written in new coordinates).
    pub forbidden: &'a [&'a str],
}

impl Default for ParseOptions<'_> {
    fn default() -> Self {
        ParseOptions {
            x: "x",
            y: "y",
            forbidden: &[],
        }
    }
}

/// Parse with `x` and `y` as coordinates.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    parse_with(src, &ParseOptions::default())
}

pub fn parse_with(src: &str, opts: &ParseOptions<'_>) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        opts,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.unexpected());
    }
    Ok(e)
}

struct Parser<'s, 'o> {
    src: &'s [u8],
    pos: usize,
    opts: &'o ParseOptions<'o>,
}

impl Parser<'_, '_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c == b'#' {
                while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, offset: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { offset, kind }
    }

    fn unexpected(&self) -> ParseError {
        match std::str::from_utf8(&self.src[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
        {
            Some(c) => self.err(self.pos, ParseErrorKind::UnexpectedChar(c)),
            None => self.err(self.pos, ParseErrorKind::UnexpectedEnd),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut items = vec![self.term()?];
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    items.push(self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    items.push(self.term()?.neg());
                }
                _ => break,
            }
        }
        Ok(Expr::add(items))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = Expr::mul(vec![acc, f]);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = Expr::div(acc, f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.exponent()?;
            return Ok(Expr::pow(base, k));
        }
        Ok(base)
    }

    /// Signed integer exponent, optionally parenthesized, right-associative.
    fn exponent(&mut self) -> Result<i32, ParseError> {
        let start = self.peek().map(|_| self.pos).unwrap_or(self.pos);
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            return Err(self.err(start, ParseErrorKind::NonIntegerExponent));
        }
        let n = self.integer()?;
        if self.src.get(self.pos) == Some(&b'.') {
            return Err(self.err(start, ParseErrorKind::NonIntegerExponent));
        }
        let mut k: i32 = n
            .try_into()
            .map_err(|_| self.err(start, ParseErrorKind::Overflow))?;
        if paren {
            if self.peek() != Some(b')') {
                return Err(self.err(start, ParseErrorKind::NonIntegerExponent));
            }
            self.pos += 1;
        }
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let e = self.exponent()?;
            if e < 0 {
                return Err(self.err(at, ParseErrorKind::NonIntegerExponent));
            }
            k = k
                .checked_pow(e as u32)
                .ok_or_else(|| self.err(at, ParseErrorKind::Overflow))?;
        }
        Ok(if neg { -k } else { k })
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<BigInt>()
            .map_err(|_| self.err(start, ParseErrorKind::UnexpectedEnd))
    }

    fn small_integer(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        if !matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
            return Err(self.err(start, ParseErrorKind::BadIndex));
        }
        let n = self.integer()?;
        n.try_into()
            .map_err(|_| self.err(start, ParseErrorKind::Overflow))
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.err(self.pos, ParseErrorKind::UnexpectedEnd)),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let n = self.integer()?;
                if self.src.get(self.pos) == Some(&b'.') {
                    return Err(self.err(start, ParseErrorKind::DecimalLiteral));
                }
                Ok(Expr::rational(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(_) => Err(self.unexpected()),
        }
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .to_string();
        let index = if self.src.get(self.pos) == Some(&b'_') {
            self.pos += 1;
            if self.src.get(self.pos) != Some(&b'{') {
                return Err(self.err(self.pos, ParseErrorKind::BadIndex));
            }
            self.pos += 1;
            let p = self.small_integer()?;
            if self.src.get(self.pos) != Some(&b'.') {
                return Err(self.err(self.pos, ParseErrorKind::BadIndex));
            }
            self.pos += 1;
            let q = self.small_integer()?;
            if self.src.get(self.pos) != Some(&b'}') {
                return Err(self.err(self.pos, ParseErrorKind::BadIndex));
            }
            self.pos += 1;
            Some((p, q))
        } else {
            None
        };

        if self.opts.forbidden.contains(&name.as_str()) {
            return Err(self.err(start, ParseErrorKind::ForbiddenName(name)));
        }
        let followed_by_paren = self.peek() == Some(b'(');
        if let Some(f) = Func::from_name(&name) {
            if index.is_some() || !followed_by_paren {
                return Err(self.err(start, ParseErrorKind::MissingArgument(name)));
            }
            self.pos += 1;
            let arg = self.expr()?;
            self.expect(b')')?;
            return Ok(Expr::func(f, arg));
        }
        if followed_by_paren {
            return Err(self.err(start, ParseErrorKind::UnknownFunction(name)));
        }
        if index.is_none() {
            if name == self.opts.x {
                return Ok(Expr::x());
            }
            if name == self.opts.y {
                return Ok(Expr::y());
            }
        }
        if name == self.opts.x || name == self.opts.y {
            return Err(self.err(start, ParseErrorKind::BadIndex));
        }
        let (p, q) = index.unwrap_or((0, 0));
        Ok(Expr::symbol(Symbol::with_index(&name, p, q)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::tree::Node;

    fn norm(s: &str) -> String {
        parse(s).unwrap().normalize().unwrap().to_string()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(norm("1 - 2 - 3"), "-4");
        assert_eq!(norm("12/2/3"), "2");
        assert_eq!(norm("2/3^2"), "2/9");
        assert_eq!(norm("-x^2"), "-x^2");
        assert_eq!(norm("x^2^2"), "x^4");
        assert_eq!(norm("2*x^-1*x"), "2");
    }

    #[test]
    fn symbols_with_indices() {
        let e = parse("B_{2.1} + A").unwrap();
        assert_eq!(
            e.symbols(),
            vec![Symbol::new("A"), Symbol::with_index("B", 2, 1)]
        );
    }

    #[test]
    fn comments_and_whitespace() {
        assert_eq!(norm("x # trailing comment\n + 1"), "x + 1");
    }

    #[test]
    fn error_offsets() {
        let e = parse("x + foo(y)").unwrap_err();
        assert_eq!(e.offset, 4);
        assert_eq!(e.kind, ParseErrorKind::UnknownFunction("foo".into()));
        let e = parse("x^1.5").unwrap_err();
        assert_eq!((e.offset, e.kind), (2, ParseErrorKind::NonIntegerExponent));
        let e = parse("x^y").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NonIntegerExponent);
        let e = parse("(x + 1").unwrap_err();
        assert_eq!((e.offset, e.kind), (6, ParseErrorKind::UnexpectedEnd));
        let e = parse("x $ y").unwrap_err();
        assert_eq!((e.offset, e.kind), (2, ParseErrorKind::UnexpectedChar('$')));
        assert_eq!(parse("sin + 1").unwrap_err().offset, 0);
    }

    #[test]
    fn coordinate_names_are_configurable() {
        let opts = ParseOptions {
            x: "xt",
            y: "yt",
            forbidden: &["x", "y"],
        };
        let e = parse_with("xt*yt", &opts).unwrap();
        assert!(matches!(e.node(), Node::Mul(_)));
        assert_eq!(e.normalize().unwrap().to_string(), "x*y");
        let err = parse_with("x + yt", &opts).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ForbiddenName("x".into()));
    }
}
