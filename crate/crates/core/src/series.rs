//! Truncated formal series in the commuting parameters `X, Y, Z` with
//! coefficients in `H`.
//!
//! Series are truncated by total parameter degree `a + b + c <= cap`.
//! Optionally coefficients are also truncated by word weight. Parameters
//! commute with every word, so all three products on `H` lift coefficient-wise.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::poly::NCPoly;
use crate::products::Product;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    X,
    Y,
    Z,
}

impl Param {
    pub fn index(self) -> usize {
        match self {
            Param::X => 0,
            Param::Y => 1,
            Param::Z => 2,
        }
    }

    /// The exponent triple of the parameter raised to `n`.
    pub fn exponent(self, n: u32) -> Exponent {
        let mut e = [0; 3];
        e[self.index()] = n;
        e
    }
}

/// Exponents of `(X, Y, Z)`.
pub type Exponent = [u32; 3];

pub fn degree(e: &Exponent) -> u32 {
    e.iter().sum()
}

fn add_exp(a: &Exponent, b: &Exponent) -> Exponent {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn divides(a: &Exponent, b: &Exponent) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn sub_exp(a: &Exponent, b: &Exponent) -> Exponent {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Every exponent of total degree at most `cap`, by degree then lexicographically.
pub fn exponents_up_to(cap: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for d in 0..=cap {
        for a in (0..=d).rev() {
            for b in (0..=d - a).rev() {
                out.push([a, b, d - a - b]);
            }
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct ParamSeries {
    cap: u32,
    weight_cap: Option<usize>,
    terms: BTreeMap<Exponent, NCPoly>,
}

impl ParamSeries {
    pub fn zero(cap: u32) -> ParamSeries {
        ParamSeries {
            cap,
            weight_cap: None,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: NCPoly, cap: u32) -> ParamSeries {
        ParamSeries::monomial(p, [0, 0, 0], cap)
    }

    pub fn one(cap: u32) -> ParamSeries {
        ParamSeries::constant(NCPoly::one(), cap)
    }

    /// `p · X^a Y^b Z^c`, dropped if beyond the cap.
    pub fn monomial(p: NCPoly, e: Exponent, cap: u32) -> ParamSeries {
        let mut s = ParamSeries::zero(cap);
        s.add_at(e, p);
        s
    }

    /// Adds a word-weight truncation; existing terms above it are dropped.
    pub fn with_weight_cap(mut self, max_weight: usize) -> ParamSeries {
        self.weight_cap = Some(max_weight);
        let terms = std::mem::take(&mut self.terms);
        for (e, p) in terms {
            self.add_at(e, p);
        }
        self
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn weight_cap(&self) -> Option<usize> {
        self.weight_cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: Exponent) -> NCPoly {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &NCPoly)> {
        self.terms.iter()
    }

    /// Adds `p` at exponent `e`, applying both truncations.
    pub fn add_at(&mut self, e: Exponent, p: NCPoly) {
        if degree(&e) > self.cap {
            return;
        }
        let p = match self.weight_cap {
            Some(w) => p.truncate_weight(w),
            None => p,
        };
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot += p;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// `1/(1 - seed·P)` as a concatenation-geometric series.
    pub fn geometric(seed: &NCPoly, param: Param, cap: u32) -> Result<ParamSeries> {
        ParamSeries::geometric_multi(&[(seed.clone(), param)], cap)
    }

    /// `1/(1 - Σ seed_j·P_j)`.
    pub fn geometric_multi(seeds: &[(NCPoly, Param)], cap: u32) -> Result<ParamSeries> {
        let mut step = ParamSeries::zero(cap);
        for (seed, param) in seeds {
            if !seed.constant_term().is_zero() {
                return domain(format!("geometric seed {seed} has a nonzero constant term"));
            }
            step.add_at(param.exponent(1), seed.clone());
        }
        let mut sum = ParamSeries::one(cap);
        let mut power = ParamSeries::one(cap);
        for _ in 0..cap {
            power = power.concat(&step)?;
            if power.is_zero() {
                break;
            }
            sum = sum + power.clone();
        }
        Ok(sum)
    }

    fn check_caps(&self, other: &ParamSeries) -> Result<Option<usize>> {
        if self.cap != other.cap {
            return Err(Error::CapMismatch(self.cap, other.cap));
        }
        Ok(match (self.weight_cap, other.weight_cap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        })
    }

    /// Coefficient at `(a,b,c)` is the sum over splittings of the exponent of
    /// `product(s_e1, t_e2)`.
    pub fn product(&self, other: &ParamSeries, product: Product) -> Result<ParamSeries> {
        let weight_cap = self.check_caps(other)?;
        if product == Product::Harmonic {
            self.check_h1()?;
            other.check_h1()?;
        }
        let mut out = ParamSeries {
            cap: self.cap,
            weight_cap,
            terms: BTreeMap::new(),
        };
        for (e1, p) in &self.terms {
            for (e2, q) in &other.terms {
                let e = add_exp(e1, e2);
                if degree(&e) > self.cap {
                    continue;
                }
                out.add_at(e, product.apply(p, q)?);
            }
        }
        Ok(out)
    }

    pub fn concat(&self, other: &ParamSeries) -> Result<ParamSeries> {
        self.product(other, Product::Concat)
    }

    pub fn shuffle(&self, other: &ParamSeries) -> Result<ParamSeries> {
        self.product(other, Product::Shuffle)
    }

    pub fn harmonic(&self, other: &ParamSeries) -> Result<ParamSeries> {
        self.product(other, Product::Harmonic)
    }

    pub fn all_in_h1(&self) -> bool {
        self.terms.values().all(|p| p.membership().in_h1)
    }

    pub(crate) fn check_h1(&self) -> Result<()> {
        match self.terms.iter().find(|(_, p)| !p.membership().in_h1) {
            Some((e, p)) => domain(format!("coefficient {p} at {e:?} is not in H^1")),
            None => Ok(()),
        }
    }

    /// The inverse for the harmonic product, computed order by order:
    /// `g_0 = 1`, `g_e = -Σ_{0 < e' <= e} g_{e-e'} * s_{e'}`.
    pub fn harmonic_inverse(&self) -> Result<ParamSeries> {
        self.check_h1()?;
        let c0 = self.coeff([0, 0, 0]);
        if c0 != NCPoly::one() {
            return domain(format!("harmonic inverse needs constant term 1, got {c0}"));
        }
        let mut g = ParamSeries {
            cap: self.cap,
            weight_cap: self.weight_cap,
            terms: BTreeMap::new(),
        };
        g.add_at([0, 0, 0], NCPoly::one());
        for e in exponents_up_to(self.cap).into_iter().skip(1) {
            let mut acc = NCPoly::zero();
            for (e2, s) in self.terms.range([0, 0, 1]..) {
                if !divides(e2, &e) {
                    continue;
                }
                if let Some(gi) = g.terms.get(&sub_exp(&e, e2)) {
                    acc -= crate::products::harmonic(gi, s)?;
                }
            }
            g.add_at(e, acc);
        }
        Ok(g)
    }

    /// Coefficient-wise image under a linear map on `H`.
    pub fn map_coeffs<F: FnMut(&NCPoly) -> NCPoly>(&self, mut f: F) -> ParamSeries {
        let mut out = ParamSeries::zero(self.cap);
        out.weight_cap = self.weight_cap;
        for (e, p) in &self.terms {
            out.add_at(*e, f(p));
        }
        out
    }

    pub fn try_map_coeffs<F>(&self, mut f: F) -> Result<ParamSeries>
    where
        F: FnMut(&NCPoly) -> Result<NCPoly>,
    {
        let mut out = ParamSeries::zero(self.cap);
        out.weight_cap = self.weight_cap;
        for (e, p) in &self.terms {
            out.add_at(*e, f(p)?);
        }
        Ok(out)
    }

    /// `p · s`, concatenating `p` on the left of every coefficient.
    pub fn left_mul(&self, p: &NCPoly) -> ParamSeries {
        self.map_coeffs(|c| p.concat(c))
    }

    /// `s · p`, concatenating `p` on the right of every coefficient.
    pub fn right_mul(&self, p: &NCPoly) -> ParamSeries {
        self.map_coeffs(|c| c.concat(p))
    }

    pub fn scale(&self, c: &Rational) -> ParamSeries {
        self.map_coeffs(|p| p.scale(c))
    }

    /// Multiplies by the parameter monomial with exponent `e`.
    pub fn shift(&self, e: Exponent) -> ParamSeries {
        let mut out = ParamSeries::zero(self.cap);
        out.weight_cap = self.weight_cap;
        for (e1, p) in &self.terms {
            out.add_at(add_exp(e1, &e), p.clone());
        }
        out
    }

    /// The same series viewed at a different cap (dropping or keeping terms).
    pub fn with_cap(&self, cap: u32) -> ParamSeries {
        let mut out = ParamSeries::zero(cap);
        out.weight_cap = self.weight_cap;
        for (e, p) in &self.terms {
            out.add_at(*e, p.clone());
        }
        out
    }

    /// First exponent (in sorted order) where the two series differ.
    pub fn first_difference(&self, other: &ParamSeries) -> Option<(Exponent, NCPoly, NCPoly)> {
        let mut keys: Vec<&Exponent> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|e| {
            let (a, b) = (self.coeff(*e), other.coeff(*e));
            (a != b).then_some((*e, a, b))
        })
    }

    /// `1` when the series is the constant one.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff([0, 0, 0]) == NCPoly::one()
    }
}

impl Add for ParamSeries {
    type Output = ParamSeries;
    fn add(mut self, rhs: ParamSeries) -> ParamSeries {
        assert_eq!(self.cap, rhs.cap, "adding series with different caps");
        for (e, p) in rhs.terms {
            self.add_at(e, p);
        }
        self
    }
}

impl Sub for ParamSeries {
    type Output = ParamSeries;
    fn sub(self, rhs: ParamSeries) -> ParamSeries {
        self + (-rhs)
    }
}

impl Neg for ParamSeries {
    type Output = ParamSeries;
    fn neg(self) -> ParamSeries {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for ParamSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (e, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "({},{},{}): {p}", e[0], e[1], e[2])?;
        }
        Ok(())
    }
}

impl fmt::Debug for ParamSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ParamSeries(cap = {}, weight_cap = {:?})", self.cap, self.weight_cap)?;
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> NCPoly {
        s.parse().unwrap()
    }

    #[test]
    fn geometric_examples() {
        let s = ParamSeries::geometric(&p("-y"), Param::Y, 2).unwrap();
        assert_eq!(s.coeff([0, 0, 0]), NCPoly::one());
        assert_eq!(s.coeff([0, 1, 0]), p("-y"));
        assert_eq!(s.coeff([0, 2, 0]), p("yy"));
        assert_eq!(s.terms().count(), 3);

        let s = ParamSeries::geometric(&NCPoly::z(), Param::Z, 1).unwrap();
        assert_eq!(s.to_string(), "(0,0,0): 1\n(0,0,1): x + y");

        let s = ParamSeries::geometric_multi(&[(p("-y"), Param::X), (NCPoly::z(), Param::Y)], 2)
            .unwrap();
        assert_eq!(s.coeff([1, 1, 0]), p("-xy - yx - 2*yy"));
    }

    #[test]
    fn geometric_rejects_constant_seed() {
        assert!(matches!(
            ParamSeries::geometric(&p("1 + y"), Param::X, 3),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn product_examples() {
        let n = 3;
        let hy = ParamSeries::geometric(&p("-y"), Param::Y, n).unwrap();
        let gz = ParamSeries::geometric(&NCPoly::z(), Param::Z, n).unwrap();
        let sh = hy.shuffle(&gz).unwrap();
        assert_eq!(sh.coeff([0, 1, 1]), p("-xy - yx - 2*yy"));

        let one = ParamSeries::one(n);
        assert_eq!(hy.concat(&one).unwrap(), hy);

        let a = 2;
        let c = ParamSeries::constant(p("-y").pow(a + 1), n);
        let st = hy.harmonic(&c).unwrap();
        assert_eq!(st.coeff([0, 0, 0]), p("-y").pow(a + 1));
    }

    #[test]
    fn product_errors() {
        let a = ParamSeries::one(2);
        let b = ParamSeries::one(3);
        assert!(matches!(a.concat(&b), Err(Error::CapMismatch(2, 3))));
        let x = ParamSeries::constant(NCPoly::x(), 2);
        assert!(matches!(x.harmonic(&a), Err(Error::Domain(_))));
    }

    #[test]
    fn harmonic_inverse_examples() {
        let h = ParamSeries::geometric(&p("-y"), Param::Y, 4).unwrap();
        let g = h.harmonic_inverse().unwrap();
        assert_eq!(g.coeff([0, 1, 0]), p("y"));
        assert_eq!(g.coeff([0, 2, 0]), p("yy + xy"));
        assert!(g.harmonic(&h).unwrap().is_one());
        assert!(ParamSeries::one(3).harmonic_inverse().unwrap().is_one());
        assert!(ParamSeries::constant(p("2"), 3).harmonic_inverse().is_err());
    }

    #[test]
    fn weight_cap_truncates() {
        let s = ParamSeries::geometric(&p("xy"), Param::X, 4).unwrap().with_weight_cap(4);
        assert_eq!(s.coeff([2, 0, 0]), p("xyxy"));
        assert!(s.coeff([3, 0, 0]).is_zero());
    }

    #[test]
    fn exponent_enumeration() {
        let es = exponents_up_to(2);
        assert_eq!(es.len(), 10);
        assert_eq!(es[0], [0, 0, 0]);
        assert!(es.windows(2).all(|w| degree(&w[0]) <= degree(&w[1])));
    }
}
