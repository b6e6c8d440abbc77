//! Rational expression trees in the motion parameter.
//!
//! Grammar: `lambda` (the parameter), `i` (the imaginary unit), decimal
//! literals (scientific notation allowed), `+ - * /`, integer powers `^`, and
//! parentheses. The parser reports explicit line/column positions on error.

use num_complex::Complex64;

use crate::{Error, Result};

/// A rational expression in the parameter.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Lambda,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    pub fn constant(z: Complex64) -> Expr {
        Expr::Const(z)
    }

    pub fn real(x: f64) -> Expr {
        Expr::Const(Complex64::new(x, 0.0))
    }

    /// Evaluate at a parameter value. Division by zero yields non-finite
    /// components, which callers screen for.
    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        match self {
            Expr::Const(z) => *z,
            Expr::Lambda => lambda,
            Expr::Add(a, b) => a.eval(lambda) + b.eval(lambda),
            Expr::Sub(a, b) => a.eval(lambda) - b.eval(lambda),
            Expr::Mul(a, b) => a.eval(lambda) * b.eval(lambda),
            Expr::Div(a, b) => a.eval(lambda) / b.eval(lambda),
            Expr::Neg(a) => -a.eval(lambda),
            Expr::Pow(a, n) => a.eval(lambda).powi(*n),
        }
    }

    /// Formal derivative with respect to the parameter.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::real(0.0),
            Expr::Lambda => Expr::real(1.0),
            Expr::Add(a, b) => Expr::Add(Box::new(a.derivative()), Box::new(b.derivative())),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.derivative()), Box::new(b.derivative())),
            Expr::Mul(a, b) => Expr::Add(
                Box::new(Expr::Mul(Box::new(a.derivative()), b.clone())),
                Box::new(Expr::Mul(a.clone(), Box::new(b.derivative()))),
            ),
            Expr::Div(a, b) => Expr::Div(
                Box::new(Expr::Sub(
                    Box::new(Expr::Mul(Box::new(a.derivative()), b.clone())),
                    Box::new(Expr::Mul(a.clone(), Box::new(b.derivative()))),
                )),
                Box::new(Expr::Pow(b.clone(), 2)),
            ),
            Expr::Neg(a) => Expr::Neg(Box::new(a.derivative())),
            Expr::Pow(a, n) => {
                if *n == 0 {
                    Expr::real(0.0)
                } else {
                    Expr::Mul(
                        Box::new(Expr::Mul(
                            Box::new(Expr::real(*n as f64)),
                            Box::new(Expr::Pow(a.clone(), n - 1)),
                        )),
                        Box::new(a.derivative()),
                    )
                }
            }
        }
    }

    /// Substitute another expression for the parameter (composition).
    pub fn substitute(&self, inner: &Expr) -> Expr {
        match self {
            Expr::Const(z) => Expr::Const(*z),
            Expr::Lambda => inner.clone(),
            Expr::Add(a, b) => {
                Expr::Add(Box::new(a.substitute(inner)), Box::new(b.substitute(inner)))
            }
            Expr::Sub(a, b) => {
                Expr::Sub(Box::new(a.substitute(inner)), Box::new(b.substitute(inner)))
            }
            Expr::Mul(a, b) => {
                Expr::Mul(Box::new(a.substitute(inner)), Box::new(b.substitute(inner)))
            }
            Expr::Div(a, b) => {
                Expr::Div(Box::new(a.substitute(inner)), Box::new(b.substitute(inner)))
            }
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(inner))),
            Expr::Pow(a, n) => Expr::Pow(Box::new(a.substitute(inner)), *n),
        }
    }

    /// Whether the parameter occurs in the expression.
    pub fn depends_on_lambda(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Lambda => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.depends_on_lambda() || b.depends_on_lambda()
            }
            Expr::Neg(a) => a.depends_on_lambda(),
            Expr::Pow(a, _) => a.depends_on_lambda(),
        }
    }
}

fn fmt_real(x: f64, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
    if x == x.trunc() && x.abs() < 1e15 {
        write!(f, "{}", x as i64)
    } else {
        write!(f, "{:e}", x)
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expr::Const(z) => {
                if z.im == 0.0 {
                    if z.re < 0.0 {
                        write!(f, "(")?;
                        fmt_real(z.re, f)?;
                        write!(f, ")")
                    } else {
                        fmt_real(z.re, f)
                    }
                } else {
                    write!(f, "(")?;
                    fmt_real(z.re, f)?;
                    write!(f, "+")?;
                    fmt_real(z.im, f)?;
                    write!(f, "*i)")
                }
            }
            Expr::Lambda => f.write_str("lambda"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Div(a, b) => write!(f, "({a}/{b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Pow(a, n) => {
                if *n < 0 {
                    write!(f, "({a}^({n}))")
                } else {
                    write!(f, "({a}^{n})")
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Token {
    Number(f64),
    Imag,
    Lambda,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
    line_offset: usize,
    col_offset: usize,
}

type Spanned = (Token, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line_offset: usize, col_offset: usize) -> Lexer<'a> {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
            line_offset,
            col_offset,
        }
    }

    fn position(&self) -> (usize, usize) {
        let line = self.line + self.line_offset - 1;
        let col = if self.line == 1 {
            self.col + self.col_offset - 1
        } else {
            self.col
        };
        (line, col)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (line, col) = self.position();
        Error::Parse {
            line,
            col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.src.get(self.pos).copied();
        if let Some(b) = b {
            self.pos += 1;
            if b == b'\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        b
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>> {
        let mut out = Vec::new();
        while let Some(b) = self.peek() {
            let (line, col) = self.position();
            match b {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.bump();
                }
                b'+' => {
                    self.bump();
                    out.push((Token::Plus, line, col));
                }
                b'-' => {
                    self.bump();
                    out.push((Token::Minus, line, col));
                }
                b'*' => {
                    self.bump();
                    out.push((Token::Star, line, col));
                }
                b'/' => {
                    self.bump();
                    out.push((Token::Slash, line, col));
                }
                b'^' => {
                    self.bump();
                    out.push((Token::Caret, line, col));
                }
                b'(' => {
                    self.bump();
                    out.push((Token::LParen, line, col));
                }
                b')' => {
                    self.bump();
                    out.push((Token::RParen, line, col));
                }
                b'0'..=b'9' | b'.' => {
                    let start = self.pos;
                    while matches!(self.peek(), Some(b'0'..=b'9') | Some(b'.')) {
                        self.bump();
                    }
                    // scientific notation
                    if matches!(self.peek(), Some(b'e') | Some(b'E')) {
                        let mark = self.pos;
                        self.bump();
                        if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                            self.bump();
                        }
                        if matches!(self.peek(), Some(b'0'..=b'9')) {
                            while matches!(self.peek(), Some(b'0'..=b'9')) {
                                self.bump();
                            }
                        } else {
                            // not an exponent after all (e.g. `2e` would be malformed);
                            // rewind so `e`-prefixed identifiers error clearly below
                            self.pos = mark;
                        }
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let value: f64 = text
                        .parse()
                        .map_err(|_| self.error(format!("malformed number `{text}`")))?;
                    out.push((Token::Number(value), line, col));
                }
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    let start = self.pos;
                    while matches!(
                        self.peek(),
                        Some(b'a'..=b'z') | Some(b'A'..=b'Z') | Some(b'0'..=b'9') | Some(b'_')
                    ) {
                        self.bump();
                    }
                    let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    match word {
                        "lambda" => out.push((Token::Lambda, line, col)),
                        "i" => out.push((Token::Imag, line, col)),
                        other => {
                            return Err(Error::Parse {
                                line,
                                col,
                                message: format!(
                                    "unknown identifier `{other}` (expected `lambda` or `i`)"
                                ),
                            })
                        }
                    }
                }
                other => {
                    return Err(Error::Parse {
                        line,
                        col,
                        message: format!("unexpected character `{}`", other as char),
                    })
                }
            }
        }
        Ok(out)
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.pos).map(|t| t.0)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map(|t| (t.1, t.2))
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Parse {
            line,
            col,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Token::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(Token::Caret) {
            self.bump();
            let mut sign = 1i32;
            let mut parens = false;
            if self.peek() == Some(Token::LParen) {
                self.bump();
                parens = true;
            }
            if self.peek() == Some(Token::Minus) {
                self.bump();
                sign = -1;
            }
            let n = match self.bump() {
                Some(Token::Number(x)) => {
                    if x != x.trunc() || x.abs() > i32::MAX as f64 {
                        return Err(self.error("exponent must be an integer"));
                    }
                    x as i32
                }
                _ => return Err(self.error("expected integer exponent after `^`")),
            };
            if parens {
                match self.bump() {
                    Some(Token::RParen) => {}
                    _ => return Err(self.error("expected `)` closing the exponent")),
                }
            }
            Ok(Expr::Pow(Box::new(base), sign * n))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Token::Number(x)) => Ok(Expr::real(x)),
            Some(Token::Imag) => Ok(Expr::Const(Complex64::new(0.0, 1.0))),
            Some(Token::Lambda) => Ok(Expr::Lambda),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => {
                        self.pos = self.pos.saturating_sub(1);
                        Err(self.error("expected `)`"))
                    }
                }
            }
            Some(tok) => {
                self.pos -= 1;
                Err(self.error(format!("unexpected token {tok:?}")))
            }
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

/// Parse an expression. `line_offset`/`col_offset` shift reported positions so
/// that errors inside a larger file point at the right place (both 1-based;
/// pass `1, 1` for standalone strings).
pub fn parse_expr_at(src: &str, line_offset: usize, col_offset: usize) -> Result<Expr> {
    let lexer = Lexer::new(src, line_offset, col_offset);
    let end = {
        let last_line = src.lines().count().max(1);
        let last_col = src
            .lines()
            .last()
            .map(|l| l.chars().count() + 1)
            .unwrap_or(1);
        let line = last_line + line_offset - 1;
        let col = if last_line == 1 {
            last_col + col_offset - 1
        } else {
            last_col
        };
        (line, col)
    };
    let tokens = lexer.tokenize()?;
    if tokens.is_empty() {
        return Err(Error::Parse {
            line: line_offset,
            col: col_offset,
            message: "empty expression".to_string(),
        });
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        end,
    };
    let expr = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.error("trailing input after expression"));
    }
    Ok(expr)
}

/// Parse a standalone expression string.
pub fn parse_expr(src: &str) -> Result<Expr> {
    parse_expr_at(src, 1, 1)
}

/// Parse an expression that must be constant (no parameter), returning its
/// value. Used for numeric fields of the motion definition format.
pub fn parse_constant_at(src: &str, line: usize, col: usize) -> Result<Complex64> {
    let expr = parse_expr_at(src, line, col)?;
    if expr.depends_on_lambda() {
        return Err(Error::Parse {
            line,
            col,
            message: "expected a constant, found `lambda`".to_string(),
        });
    }
    Ok(expr.eval(Complex64::new(0.0, 0.0)))
}
