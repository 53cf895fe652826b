//! Shuffle and harmonic (stuffle) products.
//!
//! Both are computed on pairs of words by their head recursions and then
//! extended bilinearly. Word-level results have positive integer coefficients
//! and are cached per thread; the two products are commutative, so a cache key
//! is the ordered pair of its arguments.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::poly::NCPoly;
use crate::word::Word;
use crate::Rational;

type WordSum = Rc<Vec<(Word, u64)>>;

const MEMO_LIMIT: usize = 1 << 20;

thread_local! {
    static SHUFFLE_MEMO: RefCell<HashMap<(Word, Word), WordSum>> = RefCell::new(HashMap::new());
    static HARMONIC_MEMO: RefCell<HashMap<(Word, Word), WordSum>> = RefCell::new(HashMap::new());
}

/// Which multiplication to use on `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Product {
    Concat,
    Shuffle,
    Harmonic,
}

impl Product {
    pub fn apply(self, p: &NCPoly, q: &NCPoly) -> Result<NCPoly> {
        match self {
            Product::Concat => Ok(p.concat(q)),
            Product::Shuffle => Ok(shuffle(p, q)),
            Product::Harmonic => harmonic(p, q),
        }
    }

    /// Checks that an operand is admissible for this product.
    pub fn check_operand(self, p: &NCPoly) -> Result<()> {
        if self == Product::Harmonic && !p.membership().in_h1 {
            return domain(format!("harmonic product needs arguments in H^1, got {p}"));
        }
        Ok(())
    }
}

impl fmt::Display for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Product::Concat => "cc",
            Product::Shuffle => "sh",
            Product::Harmonic => "st",
        })
    }
}

impl FromStr for Product {
    type Err = Error;
    fn from_str(s: &str) -> Result<Product> {
        match s {
            "cc" | "concat" => Ok(Product::Concat),
            "sh" | "shuffle" => Ok(Product::Shuffle),
            "st" | "harmonic" | "stuffle" => Ok(Product::Harmonic),
            _ => domain(format!("unknown product {s:?}")),
        }
    }
}

fn ordered(a: Word, b: Word) -> (Word, Word) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn memoized(
    memo: &'static std::thread::LocalKey<RefCell<HashMap<(Word, Word), WordSum>>>,
    key: (Word, Word),
    compute: impl FnOnce() -> Vec<(Word, u64)>,
) -> WordSum {
    if let Some(hit) = memo.with(|m| m.borrow().get(&key).cloned()) {
        return hit;
    }
    let value = Rc::new(compute());
    memo.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() >= MEMO_LIMIT {
            m.clear();
        }
        m.insert(key, value.clone());
    });
    value
}

fn collect(acc: HashMap<Word, u64>) -> Vec<(Word, u64)> {
    let mut v: Vec<_> = acc.into_iter().collect();
    v.sort_unstable();
    v
}

/// Shuffle of two words: `ua ш vb = u(a ш vb) + v(ua ш b)`.
pub fn shuffle_words(a: Word, b: Word) -> WordSum {
    if a.is_empty() {
        return Rc::new(vec![(b, 1)]);
    }
    if b.is_empty() {
        return Rc::new(vec![(a, 1)]);
    }
    let (a, b) = ordered(a, b);
    memoized(&SHUFFLE_MEMO, (a, b), || {
        let (u, a_tail) = a.split_first().unwrap();
        let (v, b_tail) = b.split_first().unwrap();
        let mut acc: HashMap<Word, u64> = HashMap::new();
        for (w, c) in shuffle_words(a_tail, b).iter() {
            *acc.entry(w.prepend(u)).or_default() += c;
        }
        for (w, c) in shuffle_words(a, b_tail).iter() {
            *acc.entry(w.prepend(v)).or_default() += c;
        }
        collect(acc)
    })
}

/// Harmonic product of two words in `H^1`:
/// `z_k a * z_l b = z_k(a * z_l b) + z_l(z_k a * b) + z_{k+l}(a * b)`.
///
/// Both words must be empty or end in `y`.
pub fn harmonic_words(a: Word, b: Word) -> WordSum {
    if a.is_empty() {
        return Rc::new(vec![(b, 1)]);
    }
    if b.is_empty() {
        return Rc::new(vec![(a, 1)]);
    }
    debug_assert!(a.ends_with_y() && b.ends_with_y());
    let (a, b) = ordered(a, b);
    memoized(&HARMONIC_MEMO, (a, b), || {
        let (k, a_tail) = a.split_first_block().expect("word in Hy");
        let (l, b_tail) = b.split_first_block().expect("word in Hy");
        let mut acc: HashMap<Word, u64> = HashMap::new();
        let zk = Word::z(k);
        let zl = Word::z(l);
        let zkl = Word::z(k + l);
        for (w, c) in harmonic_words(a_tail, b).iter() {
            *acc.entry(zk.concat(*w)).or_default() += c;
        }
        for (w, c) in harmonic_words(a, b_tail).iter() {
            *acc.entry(zl.concat(*w)).or_default() += c;
        }
        for (w, c) in harmonic_words(a_tail, b_tail).iter() {
            *acc.entry(zkl.concat(*w)).or_default() += c;
        }
        collect(acc)
    })
}

fn bilinear(p: &NCPoly, q: &NCPoly, on_words: fn(Word, Word) -> WordSum) -> NCPoly {
    let mut out = NCPoly::zero();
    for (u, a) in p.terms() {
        for (v, b) in q.terms() {
            let ab = a * b;
            for (w, n) in on_words(*u, *v).iter() {
                out.add_term(*w, &ab * Rational::from_integer(BigInt::from(*n)));
            }
        }
    }
    out
}

pub fn shuffle(p: &NCPoly, q: &NCPoly) -> NCPoly {
    bilinear(p, q, shuffle_words)
}

/// Harmonic product on `H^1`; errors if either argument lies outside it.
pub fn harmonic(p: &NCPoly, q: &NCPoly) -> Result<NCPoly> {
    Product::Harmonic.check_operand(p)?;
    Product::Harmonic.check_operand(q)?;
    Ok(bilinear(p, q, harmonic_words))
}

/// `n`-fold product of `p` with itself; `n = 0` gives `1`.
pub fn power(p: &NCPoly, n: usize, product: Product) -> Result<NCPoly> {
    product.check_operand(p)?;
    let mut acc = NCPoly::one();
    for _ in 0..n {
        acc = product.apply(&acc, p)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn p(s: &str) -> NCPoly {
        s.parse().unwrap()
    }

    /// Shuffle by enumerating which positions of the result come from the left word.
    fn shuffle_by_subsets(a: &Word, b: &Word) -> NCPoly {
        let (m, n) = (a.len(), b.len());
        let mut out = NCPoly::zero();
        for mask in 0u32..(1 << (m + n)) {
            if mask.count_ones() as usize != m {
                continue;
            }
            let (mut i, mut j) = (0, 0);
            let mut w = Word::EMPTY;
            for pos in 0..m + n {
                if mask >> pos & 1 == 1 {
                    w = w.push(a.get(i).unwrap());
                    i += 1;
                } else {
                    w = w.push(b.get(j).unwrap());
                    j += 1;
                }
            }
            out.add_term(w, rat(1));
        }
        out
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffle(&p("x"), &p("y")), p("xy + yx"));
        assert_eq!(shuffle(&p("xy"), &p("y")), p("2*xyy + yxy"));
        assert_eq!(shuffle(&NCPoly::one(), &p("xyx")), p("xyx"));
    }

    #[test]
    fn shuffle_matches_subset_enumeration() {
        for m in 0..=4 {
            for n in 0..=4 {
                for a in Word::all_of_weight(m) {
                    for b in Word::all_of_weight(n).step_by(3) {
                        assert_eq!(
                            shuffle(&a.into(), &b.into()),
                            shuffle_by_subsets(&a, &b),
                            "{a} ш {b}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(&p("y"), &p("y")).unwrap(), p("2*yy + xy"));
        assert_eq!(harmonic(&p("y"), &p("xy")).unwrap(), p("yxy + xyy + xxy"));
        assert_eq!(harmonic(&NCPoly::one(), &p("xxy")).unwrap(), p("xxy"));
        assert!(matches!(harmonic(&p("yx"), &p("y")), Err(Error::Domain(_))));
    }

    #[test]
    fn power_examples() {
        assert_eq!(power(&p("-y"), 2, Product::Concat).unwrap(), p("yy"));
        assert_eq!(power(&p("y"), 2, Product::Shuffle).unwrap(), p("2*yy"));
        assert_eq!(power(&p("y"), 0, Product::Harmonic).unwrap(), NCPoly::one());
        assert!(power(&p("x"), 2, Product::Harmonic).is_err());
    }

    #[test]
    fn shuffle_coefficient_sum_is_binomial() {
        let a = p("xyx");
        let b = p("yy");
        let total: Rational = shuffle(&a, &b).terms().map(|(_, c)| c.clone()).sum();
        assert_eq!(total, rat(10));
    }
}
