//! Index tuples `(k_1, ..., k_n)` and their words `z_{k_1} ... z_{k_n}`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Composition> {
        if parts.is_empty() {
            return domain("a composition needs at least one part");
        }
        if parts.contains(&0) {
            return domain(format!("composition parts must be positive: {parts:?}"));
        }
        Ok(Composition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&k| k as usize).sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// `k_1 >= 2`, i.e. the defining series converges.
    pub fn is_admissible(&self) -> bool {
        self.0[0] >= 2
    }

    pub fn to_word(&self) -> Word {
        self.0
            .iter()
            .fold(Word::EMPTY, |w, &k| w.concat(Word::z(k as usize)))
    }

    /// Inverse of [`Composition::to_word`] on nonempty words ending in `y`.
    pub fn from_word(w: &Word) -> Result<Composition> {
        if !w.ends_with_y() {
            return domain(format!("{w} does not end in y"));
        }
        let mut parts = Vec::with_capacity(w.depth());
        let mut rest = *w;
        while let Some((k, tail)) = rest.split_first_block() {
            parts.push(k as u32);
            rest = tail;
        }
        Ok(Composition(parts))
    }

    /// All compositions of `weight` into exactly `parts` positive parts,
    /// in lexicographic order of the part tuples.
    pub fn all(weight: usize, parts: usize) -> Vec<Composition> {
        fn go(remaining: usize, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
            if slots == 0 {
                if remaining == 0 {
                    out.push(Composition(cur.clone()));
                }
                return;
            }
            if remaining < slots {
                return;
            }
            for k in 1..=remaining - (slots - 1) {
                cur.push(k as u32);
                go(remaining - k, slots - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if parts > 0 {
            go(weight, parts, &mut Vec::with_capacity(parts), &mut out);
        }
        out
    }
}

impl TryFrom<&Word> for Composition {
    type Error = Error;
    fn try_from(w: &Word) -> Result<Composition> {
        Composition::from_word(w)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str(")")
    }
}

/// Accepts `(2,1)`, `2,1` or `(3)`.
impl FromStr for Composition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Composition> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Domain(format!("invalid index {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c: Composition = "(2,1)".parse().unwrap();
        assert_eq!(c.to_word().to_string(), "xyy");
        assert_eq!(Composition::new(vec![3]).unwrap().to_word().to_string(), "xxy");
        let w: Word = "xyxy".parse().unwrap();
        assert_eq!(Composition::from_word(&w).unwrap().parts(), &[2, 2]);
        assert!(c.is_admissible());
        assert!(!"(1,2)".parse::<Composition>().unwrap().is_admissible());
    }

    #[test]
    fn domain_errors() {
        assert!(Composition::from_word(&"xyx".parse().unwrap()).is_err());
        assert!(Composition::from_word(&Word::EMPTY).is_err());
        assert!(Composition::new(vec![]).is_err());
        assert!(Composition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn round_trip_up_to_weight_12() {
        for n in 1..=12 {
            for parts in 1..=n {
                for c in Composition::all(n, parts) {
                    let w = c.to_word();
                    assert_eq!(w.weight(), c.weight());
                    assert_eq!(w.depth(), c.depth());
                    assert_eq!(Composition::from_word(&w).unwrap(), c);
                }
            }
            for w in Word::all_of_weight(n).filter(Word::ends_with_y) {
                assert_eq!(Composition::from_word(&w).unwrap().to_word(), w);
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        // C(n-1, parts-1)
        assert_eq!(Composition::all(5, 2).len(), 4);
        assert_eq!(Composition::all(6, 3).len(), 10);
        assert!(Composition::all(2, 3).is_empty());
    }
}
