//! Words over the two-letter alphabet `{x, y}`.
//!
//! A word is stored as its length plus one bit per letter (`x = 0`, `y = 1`),
//! first letter in the most significant position. With that layout the derived
//! ordering on `(len, bits)` is exactly the canonical monomial order: by weight,
//! then lexicographically with `x < y`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest word representable in the packed layout.
pub const MAX_WEIGHT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    fn bit(self) -> u64 {
        match self {
            Letter::X => 0,
            Letter::Y => 1,
        }
    }

    fn from_bit(bit: u64) -> Letter {
        if bit & 1 == 0 {
            Letter::X
        } else {
            Letter::Y
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    // Field order matters: the derived `Ord` compares length first.
    len: u8,
    bits: u64,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };

    pub fn empty() -> Word {
        Word::EMPTY
    }

    pub fn letter(l: Letter) -> Word {
        Word {
            len: 1,
            bits: l.bit(),
        }
    }

    pub fn x() -> Word {
        Word::letter(Letter::X)
    }

    pub fn y() -> Word {
        Word::letter(Letter::Y)
    }

    /// `l` repeated `n` times.
    pub fn repeat(l: Letter, n: usize) -> Word {
        assert!(n <= MAX_WEIGHT, "word of weight {n} exceeds capacity");
        let bits = match (l, n) {
            (Letter::X, _) | (_, 0) => 0,
            (Letter::Y, 64) => u64::MAX,
            (Letter::Y, n) => (1u64 << n) - 1,
        };
        Word { len: n as u8, bits }
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        letters
            .into_iter()
            .fold(Word::EMPTY, |w, l| w.push(l))
    }

    /// `z_k = x^{k-1} y`.
    pub fn z(k: usize) -> Word {
        assert!(k >= 1, "z_k needs k >= 1");
        Word::repeat(Letter::X, k - 1).push(Letter::Y)
    }

    /// Every word of length `n`, in canonical order.
    pub fn all_of_weight(n: usize) -> impl Iterator<Item = Word> {
        assert!(n < MAX_WEIGHT, "cannot enumerate words of weight {n}");
        (0..(1u64 << n)).map(move |bits| Word { len: n as u8, bits })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn weight(&self) -> usize {
        self.len()
    }

    /// Number of `y` letters.
    pub fn depth(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn get(&self, i: usize) -> Option<Letter> {
        (i < self.len()).then(|| Letter::from_bit(self.bits >> (self.len() - 1 - i)))
    }

    pub fn first(&self) -> Option<Letter> {
        self.get(0)
    }

    pub fn last(&self) -> Option<Letter> {
        (!self.is_empty()).then(|| Letter::from_bit(self.bits))
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(move |i| Letter::from_bit(self.bits >> (self.len() - 1 - i)))
    }

    /// Append a letter on the right.
    pub fn push(self, l: Letter) -> Word {
        assert!(self.len() < MAX_WEIGHT, "word exceeds capacity");
        Word {
            len: self.len + 1,
            bits: (self.bits << 1) | l.bit(),
        }
    }

    /// Prepend a letter on the left.
    pub fn prepend(self, l: Letter) -> Word {
        assert!(self.len() < MAX_WEIGHT, "word exceeds capacity");
        Word {
            len: self.len + 1,
            bits: self.bits | (l.bit() << self.len),
        }
    }

    pub fn concat(self, other: Word) -> Word {
        let len = self.len() + other.len();
        assert!(len <= MAX_WEIGHT, "concatenation of weight {len} exceeds capacity");
        let shifted = if other.len() == 64 { 0 } else { self.bits << other.len };
        Word {
            len: len as u8,
            bits: shifted | other.bits,
        }
    }

    /// The first `n` letters.
    pub fn prefix(&self, n: usize) -> Word {
        assert!(n <= self.len());
        let drop = self.len() - n;
        Word {
            len: n as u8,
            bits: if drop == 64 { 0 } else { self.bits >> drop },
        }
    }

    /// Everything after the first `n` letters.
    pub fn suffix(&self, n: usize) -> Word {
        assert!(n <= self.len());
        let keep = self.len() - n;
        let mask = if keep == 64 { u64::MAX } else { (1u64 << keep) - 1 };
        Word {
            len: keep as u8,
            bits: self.bits & mask,
        }
    }

    pub fn split_first(&self) -> Option<(Letter, Word)> {
        let head = self.first()?;
        Some((head, self.suffix(1)))
    }

    /// Split `z_k w` into `(k, w)`; `None` unless the word contains a `y`.
    pub fn split_first_block(&self) -> Option<(usize, Word)> {
        if self.bits == 0 {
            return None;
        }
        // Leading x's inside the len-bit window.
        let leading_x = self.bits.leading_zeros() as usize - (64 - self.len());
        Some((leading_x + 1, self.suffix(leading_x + 1)))
    }

    /// Number of trailing `x` letters.
    pub fn trailing_x(&self) -> usize {
        if self.bits == 0 {
            self.len()
        } else {
            self.bits.trailing_zeros() as usize
        }
    }

    /// Ends in `y` (i.e. lies in `Hy`).
    pub fn ends_with_y(&self) -> bool {
        self.last() == Some(Letter::Y)
    }

    /// Starts with `x` and ends with `y` (i.e. lies in `xHy`).
    pub fn is_admissible(&self) -> bool {
        self.first() == Some(Letter::X) && self.ends_with_y()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        if s == "1" {
            return Ok(Word::EMPTY);
        }
        if s.is_empty() || s.len() > MAX_WEIGHT {
            return Err(Error::Domain(format!("invalid word {s:?}")));
        }
        s.chars()
            .map(|c| match c {
                'x' => Ok(Letter::X),
                'y' => Ok(Letter::Y),
                _ => Err(Error::Domain(format!("invalid letter {c:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word::from_letters)
    }
}
