//! A small expression language over the word algebra.
//!
//! ```text
//! expr := term (("+" | "-") term)*
//! term := "-"? (rational "*")? atom | "-"? rational
//! atom := word | "1" | call | "(" expr ")"
//! call := name "(" args ")"
//! ```
//!
//! Functions: `cc(e,e)`, `sh(e,e)`, `st(e,e)`, `dn(n,e)`, `d(e)`, `phi(e)`,
//! `lx(e)`, `pw(e,n,prod)` with `prod` one of `cc`, `sh`, `st`.

use std::fmt;

use mzv_core::operators::{dmap, lx, partial_n, phi};
use mzv_core::poly::parse_rational;
use mzv_core::products::{harmonic, power, shuffle};
use mzv_core::{Error, NCPoly, Product, Rational, Result, Word};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Word(Word),
    Const(Rational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Scale(Rational, Box<Expr>),
    Concat(Box<Expr>, Box<Expr>),
    Shuffle(Box<Expr>, Box<Expr>),
    Harmonic(Box<Expr>, Box<Expr>),
    Partial(usize, Box<Expr>),
    D(Box<Expr>),
    Phi(Box<Expr>),
    Lx(Box<Expr>),
    Power(Box<Expr>, usize, Product),
}

impl Expr {
    pub fn eval(&self) -> Result<NCPoly> {
        Ok(match self {
            Expr::Word(w) => NCPoly::word(*w),
            Expr::Const(c) => NCPoly::constant(c.clone()),
            Expr::Add(a, b) => a.eval()? + b.eval()?,
            Expr::Sub(a, b) => a.eval()? - b.eval()?,
            Expr::Neg(a) => -a.eval()?,
            Expr::Scale(q, a) => a.eval()?.scale(q),
            Expr::Concat(a, b) => a.eval()?.concat(&b.eval()?),
            Expr::Shuffle(a, b) => shuffle(&a.eval()?, &b.eval()?),
            Expr::Harmonic(a, b) => harmonic(&a.eval()?, &b.eval()?)?,
            Expr::Partial(n, a) => partial_n(&a.eval()?, *n)?,
            Expr::D(a) => dmap(&a.eval()?),
            Expr::Phi(a) => phi(&a.eval()?),
            Expr::Lx(a) => lx(&a.eval()?),
            Expr::Power(a, n, p) => power(&a.eval()?, *n, *p)?,
        })
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text);
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.error(format!("unexpected {c:?}")));
    }
    Ok(e)
}

/// Parses and evaluates in one step.
pub fn evaluate(text: &str) -> Result<NCPoly> {
    parse(text)?.eval()
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        (line, column)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let (line, column) = self.location(pos);
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.pos, message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
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
            match self.peek() {
                None => Err(self.error(format!("expected {c:?}, found end of input"))),
                Some(f) => Err(self.error(format!("expected {c:?}, found {f:?}"))),
            }
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unsigned_term()?)));
        }
        self.unsigned_term()
    }

    fn unsigned_term(&mut self) -> Result<Expr> {
        self.skip_ws();
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return self.atom();
        }
        let q = self.rational()?;
        if self.eat('*') {
            Ok(Expr::Scale(q, Box::new(self.atom()?)))
        } else {
            Ok(Expr::Const(q))
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let start = self.pos;
        self.digits();
        if self.peek() == Some('/') {
            self.pos += 1;
            if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                return Err(self.error("expected denominator"));
            }
            self.digits();
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        parse_rational(&text).map_err(|_| self.error_at(start, format!("invalid rational {text:?}")))
    }

    fn digits(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        self.digits();
        if start == self.pos {
            return Err(self.error("expected a nonnegative integer"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse()
            .map_err(|_| self.error_at(start, format!("integer {text:?} out of range")))
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('1') => {
                self.pos += 1;
                if self.peek().is_some_and(|c| c.is_ascii_digit() || c == '/') {
                    return Err(self.error_at(start, "expected an atom"));
                }
                Ok(Expr::Const(Rational::from_integer(1.into())))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                if self.eat('(') {
                    self.call(&name, start)
                } else if name.chars().all(|c| c == 'x' || c == 'y') {
                    name.parse::<Word>()
                        .map(Expr::Word)
                        .map_err(|e| self.error_at(start, e.to_string()))
                } else {
                    Err(self.error_at(start, format!("invalid word {name:?}")))
                }
            }
            Some(c) => Err(self.error(format!("unexpected {c:?}"))),
        }
    }

    fn call(&mut self, name: &str, start: usize) -> Result<Expr> {
        let boxed = |e: Expr| Box::new(e);
        let e = match name {
            "cc" | "sh" | "st" => {
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                match name {
                    "cc" => Expr::Concat(boxed(a), boxed(b)),
                    "sh" => Expr::Shuffle(boxed(a), boxed(b)),
                    _ => Expr::Harmonic(boxed(a), boxed(b)),
                }
            }
            "dn" => {
                let n = self.integer()?;
                self.expect(',')?;
                Expr::Partial(n, boxed(self.expr()?))
            }
            "d" => Expr::D(boxed(self.expr()?)),
            "phi" => Expr::Phi(boxed(self.expr()?)),
            "lx" => Expr::Lx(boxed(self.expr()?)),
            "pw" => {
                let a = self.expr()?;
                self.expect(',')?;
                let n = self.integer()?;
                self.expect(',')?;
                self.skip_ws();
                let at = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                    self.pos += 1;
                }
                let prod: String = self.chars[at..self.pos].iter().collect();
                let product = match prod.as_str() {
                    "cc" => Product::Concat,
                    "sh" => Product::Shuffle,
                    "st" => Product::Harmonic,
                    _ => return Err(self.error_at(at, format!("unknown product {prod:?}"))),
                };
                Expr::Power(boxed(a), n, product)
            }
            _ => return Err(self.error_at(start, format!("unknown function {name:?}"))),
        };
        self.expect(')')?;
        Ok(e)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Word(w) => write!(f, "{w}"),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Scale(q, a) => write!(f, "{q}*({a})"),
            Expr::Concat(a, b) => write!(f, "cc({a}, {b})"),
            Expr::Shuffle(a, b) => write!(f, "sh({a}, {b})"),
            Expr::Harmonic(a, b) => write!(f, "st({a}, {b})"),
            Expr::Partial(n, a) => write!(f, "dn({n}, {a})"),
            Expr::D(a) => write!(f, "d({a})"),
            Expr::Phi(a) => write!(f, "phi({a})"),
            Expr::Lx(a) => write!(f, "lx({a})"),
            Expr::Power(a, n, p) => write!(f, "pw({a}, {n}, {p})"),
        }
    }
}
