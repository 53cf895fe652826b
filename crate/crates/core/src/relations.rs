//! Restricted-sum elements, derivation-relation generators and their
//! certificate-producing decomposition.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::Echelon;
use crate::operators::partial_n;
use crate::poly::NCPoly;
use crate::products::{harmonic, shuffle};
use crate::word::{Letter, Word};
use crate::Rational;

/// `(-y)^n` as a concatenation power.
pub fn neg_y_pow(n: usize) -> NCPoly {
    let y = NCPoly::word(Word::repeat(Letter::Y, n));
    if n.is_multiple_of(2) {
        y
    } else {
        -y
    }
}

/// `x^n`.
pub fn x_pow(n: usize) -> NCPoly {
    NCPoly::word(Word::repeat(Letter::X, n))
}

/// `y^n`.
pub fn y_pow(n: usize) -> NCPoly {
    NCPoly::word(Word::repeat(Letter::Y, n))
}

/// The sequence `F_0(a), F_1(a), ...` defined by
/// `Σ_{j=0}^{n} (-y)^j * F_{n-j}(a) = (-y)^{a+1+n}`.
pub struct FSequence {
    a: usize,
    values: Vec<NCPoly>,
}

impl FSequence {
    pub fn new(a: usize) -> FSequence {
        FSequence {
            a,
            values: Vec::new(),
        }
    }

    pub fn get(&mut self, n: usize) -> &NCPoly {
        while self.values.len() <= n {
            let m = self.values.len();
            let mut next = neg_y_pow(self.a + 1 + m);
            for j in 1..=m {
                let prev = &self.values[m - j];
                next -= harmonic(&neg_y_pow(j), prev).expect("both factors lie in Hy");
            }
            self.values.push(next);
        }
        &self.values[n]
    }
}

/// `F_n(a)`.
pub fn f_poly(n: usize, a: usize) -> NCPoly {
    FSequence::new(a).get(n).clone()
}

/// `x(x^{k-a-b-2} ш y^b)y^{a+1} - x^{k-a-b-1}(x^b ш y^a)y`, homogeneous of weight `k`.
pub fn rsf_element(a: usize, b: usize, k: usize) -> Result<NCPoly> {
    if k < a + b + 2 {
        return domain(format!("restricted sum element needs k >= a + b + 2, got a={a}, b={b}, k={k}"));
    }
    let c = k - a - b - 2;
    let first = NCPoly::x()
        .concat(&shuffle(&x_pow(c), &y_pow(b)))
        .concat(&y_pow(a + 1));
    let second = x_pow(c + 1)
        .concat(&shuffle(&x_pow(b), &y_pow(a)))
        .concat(&NCPoly::y());
    Ok(first - second)
}

/// `(z^c ш (-y)^b)(-y)^{a+1} - z^c(z^b ш (-y)^a)(-y)`.
pub fn prop_element(a: usize, b: usize, c: usize) -> NCPoly {
    let z = NCPoly::z();
    let zc = z.pow(c);
    let first = shuffle(&zc, &neg_y_pow(b)).concat(&neg_y_pow(a + 1));
    let second = zc
        .concat(&shuffle(&z.pow(b), &neg_y_pow(a)))
        .concat(&neg_y_pow(1));
    first - second
}

/// A derivation-relation generator `∂_n(w)` with `w ∈ xHy`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub n: usize,
    pub word: Word,
    pub image: NCPoly,
}

/// Every `∂_n(w)` of total weight `k` with `w` a word in `xHy`, ordered by
/// ascending `n` and then canonical word order.
pub fn derivation_generators(k: usize) -> Vec<Generator> {
    let mut out = Vec::new();
    for n in 1..=k.saturating_sub(2) {
        let inner = k - n - 2;
        for mid in Word::all_of_weight(inner) {
            let word = Word::x().concat(mid).push(Letter::Y);
            let image = partial_n(&NCPoly::word(word), n).expect("n >= 1");
            out.push(Generator { n, word, image });
        }
    }
    out
}

/// One term `coeff · ∂_n(word)` of a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateTerm {
    pub n: usize,
    #[serde(with = "word_text")]
    pub word: Word,
    #[serde(with = "rational_text")]
    pub coeff: Rational,
}

/// `target = Σ coeff · ∂_n(word)` at weight `weight`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub weight: usize,
    pub target: NCPoly,
    pub terms: Vec<CertificateTerm>,
}

impl Certificate {
    pub fn expand(&self) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for t in &self.terms {
            out += partial_n(&NCPoly::word(t.word), t.n)?.scale(&t.coeff);
        }
        Ok(out)
    }

    /// Re-expands the terms and checks the weight bookkeeping.
    pub fn verify(&self) -> bool {
        let weights_ok = self
            .terms
            .iter()
            .all(|t| t.word.is_admissible() && t.word.weight() + t.n == self.weight);
        let target_ok = self.target.is_zero() || self.target.homogeneous_weight() == Some(self.weight);
        weights_ok && target_ok && self.expand().is_ok_and(|e| e == self.target)
    }
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "weight: {}", self.weight)?;
        writeln!(f, "target: {}", self.target)?;
        write!(f, "terms:")?;
        if self.terms.is_empty() {
            write!(f, " none")?;
        }
        for t in &self.terms {
            write!(f, "\n  {} * dn({}, {})", t.coeff, t.n, t.word)?;
        }
        Ok(())
    }
}

/// Elimination over the weight-`k` derivation generators, reusable across
/// targets of that weight.
pub struct Decomposer {
    weight: usize,
    generators: Vec<Generator>,
    echelon: Echelon<Word>,
}

impl Decomposer {
    pub fn new(k: usize) -> Decomposer {
        let generators = derivation_generators(k);
        let echelon = Echelon::from_columns(
            generators
                .iter()
                .map(|g| g.image.terms().map(|(w, c)| (*w, c.clone())).collect()),
            true,
        );
        Decomposer {
            weight: k,
            generators,
            echelon,
        }
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Dimension of the weight-`k` part of `Σ_n ∂_n(xHy)`.
    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn decompose(&self, target: &NCPoly) -> Result<Certificate> {
        let k = self.weight;
        if !target.is_zero() && target.homogeneous_weight() != Some(k) {
            return domain(format!("target {target} is not homogeneous of weight {k}"));
        }
        if !target.membership().in_h0 {
            return domain(format!("target {target} is not in H^0"));
        }
        let v: BTreeMap<Word, Rational> = target.terms().map(|(w, c)| (*w, c.clone())).collect();
        let coeffs = self.echelon.express(&v).map_err(|residual| Error::NotInSpan {
            residual: NCPoly::from_terms(residual),
        })?;
        let terms = coeffs
            .into_iter()
            .map(|(i, coeff)| CertificateTerm {
                n: self.generators[i].n,
                word: self.generators[i].word,
                coeff,
            })
            .collect();
        Ok(Certificate {
            weight: k,
            target: target.clone(),
            terms,
        })
    }
}

/// Expresses `target` (homogeneous of weight `k`, in `H^0`) as a rational
/// combination of the `∂_n(w)`.
pub fn decompose(target: &NCPoly, k: usize) -> Result<Certificate> {
    Decomposer::new(k).decompose(target)
}

/// Decomposers keyed by weight.
#[derive(Default)]
pub struct DecomposerCache {
    by_weight: HashMap<usize, Decomposer>,
}

impl DecomposerCache {
    pub fn get(&mut self, k: usize) -> &Decomposer {
        self.by_weight.entry(k).or_insert_with(|| Decomposer::new(k))
    }
}

pub(crate) mod word_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::word::Word;

    pub fn serialize<S: Serializer>(w: &Word, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(w)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Word, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) mod rational_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        crate::poly::parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
