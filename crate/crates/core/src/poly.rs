//! Noncommutative polynomials in `x, y` with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::word::{Letter, Word};
use crate::Rational;

/// An element of `Q<x,y>`, kept in canonical form: each word at most once,
/// no zero coefficients, terms ordered by the canonical word order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, Rational>,
}

/// Subalgebra membership of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Membership {
    /// Every nonconstant word ends in `y`.
    pub in_h1: bool,
    /// Additionally every nonconstant word starts with `x`.
    pub in_h0: bool,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl NCPoly {
    pub fn zero() -> NCPoly {
        NCPoly::default()
    }

    pub fn one() -> NCPoly {
        NCPoly::word(Word::EMPTY)
    }

    pub fn constant(c: Rational) -> NCPoly {
        NCPoly::term(c, Word::EMPTY)
    }

    pub fn word(w: Word) -> NCPoly {
        NCPoly::term(Rational::one(), w)
    }

    pub fn term(c: Rational, w: Word) -> NCPoly {
        let mut p = NCPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn x() -> NCPoly {
        NCPoly::word(Word::x())
    }

    pub fn y() -> NCPoly {
        NCPoly::word(Word::y())
    }

    /// `z = x + y`.
    pub fn z() -> NCPoly {
        NCPoly::x() + NCPoly::y()
    }

    /// `z_k = x^{k-1} y`.
    pub fn z_k(k: usize) -> NCPoly {
        NCPoly::word(Word::z(k))
    }

    pub fn letter(l: Letter) -> NCPoly {
        NCPoly::word(Word::letter(l))
    }

    /// Builds a canonical polynomial from an arbitrary multiset of terms.
    pub fn from_terms<I: IntoIterator<Item = (Word, Rational)>>(terms: I) -> NCPoly {
        let mut p = NCPoly::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Word::EMPTY)
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::weight)
    }

    pub fn min_weight(&self) -> Option<usize> {
        self.terms.keys().next().map(Word::weight)
    }

    /// The common weight of all terms, if there is one. Zero has none.
    pub fn homogeneous_weight(&self) -> Option<usize> {
        match (self.min_weight(), self.max_weight()) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }

    /// Sum of the terms of weight exactly `n`.
    pub fn weight_project(&self, n: usize) -> NCPoly {
        let lo = Word::repeat(Letter::X, n);
        NCPoly {
            terms: self
                .terms
                .range(lo..)
                .take_while(|(w, _)| w.weight() == n)
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }

    /// Drops every term of weight above `max`.
    pub fn truncate_weight(&self, max: usize) -> NCPoly {
        NCPoly {
            terms: self
                .terms
                .iter()
                .take_while(|(w, _)| w.weight() <= max)
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }

    pub fn membership(&self) -> Membership {
        let mut in_h1 = true;
        let mut in_h0 = true;
        for w in self.terms.keys().filter(|w| !w.is_empty()) {
            if !w.ends_with_y() {
                in_h1 = false;
                in_h0 = false;
                break;
            }
            if w.first() != Some(Letter::X) {
                in_h0 = false;
            }
        }
        Membership { in_h1, in_h0 }
    }

    /// Lies in `Hy`: in `H^1` with no constant term.
    pub fn in_hy(&self) -> bool {
        self.constant_term().is_zero() && self.membership().in_h1
    }

    pub fn scale(&self, c: &Rational) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly {
            terms: self.terms.iter().map(|(w, a)| (*w, a * c)).collect(),
        }
    }

    /// Concatenation product, extended bilinearly.
    pub fn concat(&self, other: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(*v), a * b);
            }
        }
        out
    }

    /// `n`-fold concatenation power.
    pub fn pow(&self, n: usize) -> NCPoly {
        (0..n).fold(NCPoly::one(), |acc, _| acc.concat(self))
    }

    /// Applies `f` to every word and sums the images with their coefficients.
    pub fn map_words<F>(&self, mut f: F) -> NCPoly
    where
        F: FnMut(&Word) -> NCPoly,
    {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out += f(w).scale(c);
        }
        out
    }

    pub fn filter<F: FnMut(&Word) -> bool>(&self, mut keep: F) -> NCPoly {
        NCPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }
}

impl From<Word> for NCPoly {
    fn from(w: Word) -> NCPoly {
        NCPoly::word(w)
    }
}

impl AddAssign<&NCPoly> for NCPoly {
    fn add_assign(&mut self, rhs: &NCPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(*w, c.clone());
        }
    }
}

impl AddAssign for NCPoly {
    fn add_assign(&mut self, rhs: NCPoly) {
        if self.terms.len() < rhs.terms.len() {
            let lhs = std::mem::replace(self, rhs);
            *self += &lhs;
        } else {
            for (w, c) in rhs.terms {
                self.add_term(w, c);
            }
        }
    }
}

impl SubAssign<&NCPoly> for NCPoly {
    fn sub_assign(&mut self, rhs: &NCPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(*w, -c.clone());
        }
    }
}

impl SubAssign for NCPoly {
    fn sub_assign(&mut self, rhs: NCPoly) {
        *self -= &rhs;
    }
}

impl Add for NCPoly {
    type Output = NCPoly;
    fn add(mut self, rhs: NCPoly) -> NCPoly {
        self += rhs;
        self
    }
}

impl Add<&NCPoly> for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for NCPoly {
    type Output = NCPoly;
    fn sub(mut self, rhs: NCPoly) -> NCPoly {
        self -= &rhs;
        self
    }
}

impl Sub<&NCPoly> for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly {
            terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect(),
        }
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        -(self.clone())
    }
}

/// Concatenation.
impl Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        self.concat(rhs)
    }
}

impl Mul for NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: NCPoly) -> NCPoly {
        self.concat(&rhs)
    }
}

impl std::iter::Sum for NCPoly {
    fn sum<I: Iterator<Item = NCPoly>>(iter: I) -> NCPoly {
        iter.fold(NCPoly::zero(), |acc, p| acc + p)
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if w.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{abs}*{w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCPoly({self})")
    }
}

/// Parses the linear text form: a signed sum of terms `c*w`, `w` or `c`.
impl FromStr for NCPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<NCPoly> {
        TextParser::new(s).parse()
    }
}

impl Serialize for NCPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NCPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<NCPoly, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses an exact rational of the form `p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Domain(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

struct TextParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> TextParser<'a> {
    fn new(src: &'a str) -> Self {
        TextParser { src, pos: 0 }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Err(Error::Parse {
            line,
            column,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn parse(mut self) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        let mut sign = 1;
        self.skip_ws();
        if self.peek() == Some('-') {
            sign = -1;
            self.pos += 1;
        }
        loop {
            self.skip_ws();
            let (c, w) = self.term()?;
            out.add_term(w, c * rat(sign));
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                Some(ch) => return self.error(format!("unexpected {ch:?}")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(Rational, Word)> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit() || c == '/');
                let Ok(coeff) = parse_rational(digits) else {
                    return self.error(format!("invalid rational {digits:?}"));
                };
                self.skip_ws();
                if self.peek() == Some('*') {
                    self.pos += 1;
                    self.skip_ws();
                    let w = self.word()?;
                    Ok((coeff, w))
                } else {
                    Ok((coeff, Word::EMPTY))
                }
            }
            Some('x' | 'y') => Ok((Rational::one(), self.word()?)),
            Some(ch) => self.error(format!("unexpected {ch:?}")),
            None => self.error("unexpected end of input"),
        }
    }

    fn word(&mut self) -> Result<Word> {
        if self.peek() == Some('1') {
            self.pos += 1;
            return Ok(Word::EMPTY);
        }
        let letters = self.take_while(|c| c == 'x' || c == 'y');
        if letters.is_empty() {
            return self.error("expected a word");
        }
        match letters.parse() {
            Ok(w) => Ok(w),
            Err(e) => self.error(e.to_string()),
        }
    }
}
