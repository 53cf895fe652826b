//! Verification sweeps over parameter ranges, each producing a list of
//! [`IdentityReport`]s in a deterministic order.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::identities::{
    eq4_elementwise_check, eq4_span_check, identity_check, lx_phi_consistency, phi_round_trip, prop1_check, prop2_check,
    random_poly, IdentityName, IdentityReport,
};
use crate::numeric::{restricted_sum_indices, zeta_sum, ZetaEvaluator, DEFAULT_CUTOFF};
use crate::operators::{dmap, exp_dy, exp_dy_closed, partial_n, phi};
use crate::poly::NCPoly;
use crate::products::{shuffle, Product};
use crate::relations::{derivation_generators, rsf_element, DecomposerCache};
use crate::series::ParamSeries;
use crate::word::{Letter, Word};
use crate::composition::Composition;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Products,
    Operators,
    Prop2,
    Prop1,
    Lemmas,
    Eq4,
    Theorem,
    Numeric,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Products,
        Suite::Operators,
        Suite::Prop2,
        Suite::Prop1,
        Suite::Lemmas,
        Suite::Eq4,
        Suite::Theorem,
        Suite::Numeric,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Products => "products",
            Suite::Operators => "operators",
            Suite::Prop2 => "prop2",
            Suite::Prop1 => "prop1",
            Suite::Lemmas => "lemmas",
            Suite::Eq4 => "eq4",
            Suite::Theorem => "theorem",
            Suite::Numeric => "numeric",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown suite {s:?}")))
    }
}

/// Overrides for the sweep ranges. `None` means the default for each suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Series truncation for `lemmas` and `operators`.
    pub cap: Option<u32>,
    /// Weight bound for the weight-indexed sweeps.
    pub max_weight: Option<usize>,
    /// Numeric summation cutoff.
    pub cutoff: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            cap: None,
            max_weight: None,
            cutoff: DEFAULT_CUTOFF,
        }
    }
}

pub const PRODUCTS_MAX_WEIGHT: usize = 9;
pub const PRODUCTS_TRIPLES: usize = 200;
pub const PROP2_MAX_SUM: usize = 6;
pub const PROP1_MAX_SUM: usize = 5;
pub const PROP1_CONSISTENCY_MAX_WEIGHT: usize = 8;
pub const LEMMAS_CAP: u32 = 6;
pub const EQ8_MAX_A: usize = 4;
pub const EQ4_MAX_WEIGHT: usize = 8;
pub const THEOREM_MAX_WEIGHT: usize = 10;
pub const NUMERIC_MAX_WEIGHT: usize = 7;
pub const HOMOMORPHISM_MAX_WEIGHT: usize = 5;
pub const OPERATORS_PHI_MAX_WEIGHT: usize = 10;
pub const OPERATORS_EXP_CAP: u32 = 6;
pub const OPERATORS_ROUND_TRIP_CAP: u32 = 5;
pub const OPERATORS_PARTIAL_MAX_WEIGHT: usize = 8;
pub const OPERATORS_PARTIAL_MAX_N: usize = 6;

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<Vec<IdentityReport>> {
    match suite {
        Suite::Products => Ok(products_suite(config.max_weight.unwrap_or(PRODUCTS_MAX_WEIGHT))),
        Suite::Operators => operators_suite(config),
        Suite::Prop2 => Ok(prop2_suite(PROP2_MAX_SUM)),
        Suite::Prop1 => prop1_suite(
            PROP1_MAX_SUM,
            config.max_weight.unwrap_or(PROP1_CONSISTENCY_MAX_WEIGHT),
        ),
        Suite::Lemmas => lemmas_suite(config.cap.unwrap_or(LEMMAS_CAP)),
        Suite::Eq4 => eq4_suite(config.max_weight.unwrap_or(EQ4_MAX_WEIGHT)),
        Suite::Theorem => theorem_suite(config.max_weight.unwrap_or(THEOREM_MAX_WEIGHT)),
        Suite::Numeric => numeric_suite(
            config.max_weight.unwrap_or(NUMERIC_MAX_WEIGHT),
            config.cutoff,
        ),
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::EACH {
                out.extend(run_suite(s, config)?);
            }
            Ok(out)
        }
    }
}

fn random_word<R: Rng>(rng: &mut R, len: usize, in_h1: bool) -> Word {
    let mut w = Word::from_letters((0..len).map(|_| if rng.gen() { Letter::X } else { Letter::Y }));
    if in_h1 && len > 0 {
        w = w.prefix(len - 1).push(Letter::Y);
    }
    w
}

/// `count` word triples with total weight at most `max_weight`.
pub fn random_triples(seed: u64, count: usize, max_weight: usize, in_h1: bool) -> Vec<[Word; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let total = rng.gen_range(0..=max_weight);
            let a = rng.gen_range(0..=total);
            let b = rng.gen_range(0..=total - a);
            let c = total - a - b;
            [
                random_word(&mut rng, a, in_h1),
                random_word(&mut rng, b, in_h1),
                random_word(&mut rng, c, in_h1),
            ]
        })
        .collect()
}

/// Commutativity, associativity, closure and weight additivity of one product
/// on random triples.
fn product_laws(product: Product, triples: &[[Word; 3]], max_weight: usize) -> Vec<IdentityReport> {
    let name = match product {
        Product::Shuffle => "shuffle",
        Product::Harmonic => "harmonic",
        Product::Concat => "concat",
    };
    let params = [("triples", triples.len() as u64), ("max_weight", max_weight as u64)];
    let mut comm = IdentityReport::new(format!("{name}_commutative"), &params);
    let mut assoc = IdentityReport::new(format!("{name}_associative"), &params);
    let mut closure = IdentityReport::new(format!("{name}_closure"), &params);
    let mut graded = IdentityReport::new(format!("{name}_weight_additive"), &params);
    let mul = |a: &NCPoly, b: &NCPoly| product.apply(a, b).expect("operands in domain");
    for [u, v, w] in triples {
        let (p, q, r) = (NCPoly::word(*u), NCPoly::word(*v), NCPoly::word(*w));
        let pq = mul(&p, &q);
        comm.compare_poly(None, &pq, &mul(&q, &p));
        assoc.compare_poly(None, &mul(&pq, &r), &mul(&p, &mul(&q, &r)));
        let expected_weight = u.weight() + v.weight();
        if pq.homogeneous_weight() != Some(expected_weight) {
            graded.compare_poly(None, &pq, &NCPoly::zero());
        }
        let (mp, mq, mpq) = (p.membership(), q.membership(), pq.membership());
        if (mp.in_h1 && mq.in_h1 && !mpq.in_h1) || (mp.in_h0 && mq.in_h0 && !mpq.in_h0) {
            closure.compare_poly(None, &pq, &NCPoly::zero());
        }
    }
    vec![comm, assoc, closure, graded]
}

pub fn products_suite(max_weight: usize) -> Vec<IdentityReport> {
    let shuffle_triples = random_triples(1, PRODUCTS_TRIPLES, max_weight, false);
    let harmonic_triples = random_triples(2, PRODUCTS_TRIPLES, max_weight, true);
    let mut out = product_laws(Product::Shuffle, &shuffle_triples, max_weight);
    out.extend(product_laws(Product::Harmonic, &harmonic_triples, max_weight));

    // Coefficient sum of u ш v is C(m+n, m).
    let mut counting = IdentityReport::new("shuffle_binomial_count", &[("max_weight", max_weight as u64)]);
    for [u, v, _] in &shuffle_triples {
        let total: crate::Rational = shuffle(&NCPoly::word(*u), &NCPoly::word(*v))
            .terms()
            .map(|(_, c)| c.clone())
            .sum();
        let expected = binomial(u.len() + v.len(), u.len());
        counting.compare_poly(
            None,
            &NCPoly::constant(total),
            &NCPoly::constant(crate::poly::rat(expected as i64)),
        );
    }
    out.push(counting);
    out
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

pub fn operators_suite(config: &SuiteConfig) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();

    let phi_weight = OPERATORS_PHI_MAX_WEIGHT;
    let mut involution = IdentityReport::new("phi_involution", &[("max_weight", phi_weight as u64)]);
    for n in 0..=phi_weight {
        for w in Word::all_of_weight(n) {
            let p = NCPoly::word(w);
            involution.compare_poly(None, &phi(&phi(&p)), &p);
        }
    }
    out.push(involution);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut multiplicative = IdentityReport::new("phi_multiplicative", &[("samples", 50)]);
    let mut leibniz = IdentityReport::new("leibniz", &[("samples", 50), ("max_n", 4)]);
    for _ in 0..50 {
        let p = random_poly(&mut rng, 6, 3);
        let q = random_poly(&mut rng, 6, 3);
        multiplicative.compare_poly(None, &phi(&p.concat(&q)), &phi(&p).concat(&phi(&q)));
        for n in 1..=4 {
            let lhs = partial_n(&p.concat(&q), n)?;
            let rhs = partial_n(&p, n)?.concat(&q) + p.concat(&partial_n(&q, n)?);
            leibniz.compare_poly(None, &lhs, &rhs);
        }
        leibniz.compare_poly(None, &dmap(&p.concat(&q)), &(dmap(&p).concat(&q) + p.concat(&dmap(&q))));
    }
    out.push(multiplicative);
    out.push(leibniz);

    let exp_cap = config.cap.unwrap_or(OPERATORS_EXP_CAP);
    let mut inverse = IdentityReport::new("exp_dY_inverse", &[("cap", exp_cap as u64)]);
    let mut closed = IdentityReport::new("exp_dY_closed_form", &[("cap", exp_cap as u64)]);
    let mut inputs = vec![NCPoly::x(), NCPoly::y(), "xxy".parse()?];
    inputs.extend((0..4).map(|_| random_poly(&mut rng, 4, 3)));
    for p in &inputs {
        let s = ParamSeries::constant(p.clone(), exp_cap);
        inverse.compare_series(&exp_dy(&exp_dy(&s, 1), -1), &s);
        inverse.compare_series(&exp_dy(&exp_dy(&s, -1), 1), &s);
        closed.compare_series(&exp_dy(&s, 1), &exp_dy_closed(&s, 1)?);
        closed.compare_series(&exp_dy(&s, -1), &exp_dy_closed(&s, -1)?);
    }
    out.push(inverse);
    out.push(closed);

    let rt_cap = config.cap.unwrap_or(OPERATORS_ROUND_TRIP_CAP);
    let mut round_trip = IdentityReport::new("phi_yY_round_trip", &[("cap", rt_cap as u64)]);
    for _ in 0..8 {
        let s = random_h1_series(&mut rng, rt_cap);
        if !phi_round_trip(&s)? {
            round_trip.fail(crate::identities::Discrepancy {
                at: None,
                lhs: s.coeff([0, 0, 0]),
                rhs: NCPoly::zero(),
            });
        }
    }
    out.push(round_trip);

    // Containment holds on H^0 = Q + xHy (and on H^1), not on all of H:
    // ∂_1(yx) = -xyx + yxy.
    let partial_params = [
        ("max_weight", OPERATORS_PARTIAL_MAX_WEIGHT as u64),
        ("max_n", OPERATORS_PARTIAL_MAX_N as u64),
    ];
    let mut image = IdentityReport::new("partial_image_in_H0", &partial_params);
    let mut image_h1 = IdentityReport::new("partial_image_in_H1", &partial_params);
    for len in 0..=OPERATORS_PARTIAL_MAX_WEIGHT {
        for w in Word::all_of_weight(len) {
            let m = NCPoly::word(w).membership();
            if !m.in_h1 {
                continue;
            }
            for n in 1..=OPERATORS_PARTIAL_MAX_N {
                let img = partial_n(&NCPoly::word(w), n)?;
                let graded = img.is_zero() || img.homogeneous_weight() == Some(len + n);
                let target = if m.in_h0 { &mut image } else { &mut image_h1 };
                let inside = if m.in_h0 {
                    img.membership().in_h0
                } else {
                    img.membership().in_h1
                };
                if !inside || !graded {
                    target.compare_poly(None, &img, &NCPoly::zero());
                }
            }
        }
    }
    out.push(image);
    out.push(image_h1);
    Ok(out)
}

/// A series with a few `Hy`-valued coefficients of low weight and constant term 0 or 1.
pub fn random_h1_series<R: Rng>(rng: &mut R, cap: u32) -> ParamSeries {
    let mut s = ParamSeries::zero(cap);
    if rng.gen() {
        s.add_at([0, 0, 0], NCPoly::one());
    }
    for _ in 0..4 {
        let mut e = [0u32; 3];
        let d = rng.gen_range(0..=cap.min(2));
        for _ in 0..d {
            e[rng.gen_range(0..3)] += 1;
        }
        let len = rng.gen_range(1..=3);
        let w = random_word(rng, len, true);
        s.add_at(e, NCPoly::term(crate::poly::rat(rng.gen_range(-2..=2)), w));
    }
    s
}

pub fn prop2_suite(max_sum: usize) -> Vec<IdentityReport> {
    tuples(max_sum)
        .par_iter()
        .map(|&(a, b, c)| prop2_check(a, b, c))
        .collect()
}

/// All `(a, b, c)` with `a + b + c <= max_sum`.
pub fn tuples(max_sum: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..=max_sum {
        for b in 0..=max_sum - a {
            for c in 0..=max_sum - a - b {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// All `(a, b, k)` with `a + b + 2 <= k <= max_weight`.
pub fn rsf_params(max_weight: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for k in 2..=max_weight {
        for a in 0..=k - 2 {
            for b in 0..=k - 2 - a {
                out.push((a, b, k));
            }
        }
    }
    out
}

pub fn prop1_suite(max_sum: usize, max_weight: usize) -> Result<Vec<IdentityReport>> {
    let mut out: Vec<IdentityReport> = tuples(max_sum)
        .par_iter()
        .map(|&(a, b, c)| prop1_check(a, b, c))
        .collect();
    for (a, b, k) in rsf_params(max_weight) {
        out.push(lx_phi_consistency(a, b, k)?);
    }
    Ok(out)
}

pub fn lemmas_suite(cap: u32) -> Result<Vec<IdentityReport>> {
    let mut jobs: Vec<(IdentityName, Option<usize>)> = IdentityName::ALL
        .into_iter()
        .filter(|n| *n != IdentityName::Eq8)
        .map(|n| (n, None))
        .collect();
    jobs.extend((0..=EQ8_MAX_A).map(|a| (IdentityName::Eq8, Some(a))));
    jobs.par_iter()
        .map(|&(name, a)| identity_check(name, cap, a))
        .collect()
}

pub fn eq4_suite(max_weight: usize) -> Result<Vec<IdentityReport>> {
    let graded: Vec<IdentityReport> = (2..=max_weight)
        .into_par_iter()
        .map(eq4_span_check)
        .collect::<Result<_>>()?;
    let elementwise: Vec<IdentityReport> = (2..=max_weight)
        .into_par_iter()
        .map(eq4_elementwise_check)
        .collect::<Result<_>>()?;
    Ok(graded.into_iter().chain(elementwise).collect())
}

/// Decomposes every restricted-sum element up to `max_weight` and re-expands
/// each certificate.
pub fn theorem_suite(max_weight: usize) -> Result<Vec<IdentityReport>> {
    let params = rsf_params(max_weight);
    let by_weight: Vec<Vec<IdentityReport>> = (2..=max_weight)
        .into_par_iter()
        .map(|k| -> Result<Vec<IdentityReport>> {
            let mut cache = DecomposerCache::default();
            let dec = cache.get(k);
            params
                .iter()
                .filter(|p| p.2 == k)
                .map(|&(a, b, k)| {
                    let mut r = IdentityReport::new(
                        "theorem",
                        &[("a", a as u64), ("b", b as u64), ("k", k as u64)],
                    );
                    let target = rsf_element(a, b, k)?;
                    match dec.decompose(&target) {
                        Ok(cert) => {
                            r.note("terms", cert.terms.len() as u64);
                            r.note("rank", dec.rank() as u64);
                            if !cert.verify() {
                                let expanded = cert.expand()?;
                                r.compare_poly(None, &expanded, &target);
                                r.pass = false;
                            }
                        }
                        Err(Error::NotInSpan { residual }) => {
                            r.fail(crate::identities::Discrepancy {
                                at: None,
                                lhs: target,
                                rhs: residual,
                            });
                        }
                        Err(e) => return Err(e),
                    }
                    Ok(r)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(by_weight.into_iter().flatten().collect())
}

fn numeric_report(name: &str, params: &[(&str, u64)], pass: bool, value: f64, bound: f64) -> IdentityReport {
    let mut r = IdentityReport::new(name, params);
    r.pass = pass;
    r.note("value", value);
    r.note("bound", bound);
    r
}

/// Numerical corroboration: derivation generators and restricted-sum elements
/// map to zero, both sides of the restricted sum formula agree, `Z` is
/// multiplicative, `ζ(3)` is not a relation, and depth-one values match `π`.
pub fn numeric_suite(max_weight: usize, cutoff: u64) -> Result<Vec<IdentityReport>> {
    let eval = ZetaEvaluator::new(cutoff);
    let m = ("M", cutoff);

    // Warm the cache in parallel; everything after is lookups.
    let mut comps: Vec<Composition> = Vec::new();
    for k in 2..=max_weight {
        for w in Word::all_of_weight(k).filter(Word::is_admissible) {
            comps.push(Composition::from_word(&w)?);
        }
    }
    comps.par_iter().try_for_each(|c| eval.zeta(c).map(|_| ()))?;

    let mut out = Vec::new();
    for k in 3..=max_weight {
        for g in derivation_generators(k) {
            let kc = eval.kernel_check(&g.image)?;
            let mut r = numeric_report(
                "kernel_derivation",
                &[("n", g.n as u64), ("k", k as u64), m],
                kc.pass,
                kc.eval.value,
                kc.eval.total_error(),
            );
            r.note("word", g.word.to_string());
            out.push(r);
        }
    }
    for (a, b, k) in rsf_params(max_weight) {
        let p = [("a", a as u64), ("b", b as u64), ("k", k as u64), m];
        let kc = eval.kernel_check(&rsf_element(a, b, k)?)?;
        out.push(numeric_report("kernel_rsf", &p, kc.pass, kc.eval.value, kc.eval.total_error()));
        let (lhs, rhs) = restricted_sum_indices(a, b, k)?;
        let (l, r) = (zeta_sum(&eval, &lhs)?, zeta_sum(&eval, &rhs)?);
        let diff = (l.value - r.value).abs();
        let bound = l.total_error() + r.total_error();
        out.push(numeric_report("restricted_sum_formula", &p, diff <= bound, diff, bound));
    }

    let mut pairs = Vec::new();
    for wu in 2..=HOMOMORPHISM_MAX_WEIGHT {
        for wv in 2..=HOMOMORPHISM_MAX_WEIGHT - wu {
            for u in Word::all_of_weight(wu).filter(Word::is_admissible) {
                for v in Word::all_of_weight(wv).filter(Word::is_admissible) {
                    pairs.push((u, v));
                }
            }
        }
    }
    let unit = Word::EMPTY;
    pairs.push((unit, Word::x().push(Letter::Y)));
    for (u, v) in pairs {
        for product in [Product::Shuffle, Product::Harmonic] {
            let hc = eval.homomorphism_check(&NCPoly::word(u), &NCPoly::word(v), product)?;
            let mut r = numeric_report(
                &format!("homomorphism_{}", if product == Product::Shuffle { "shuffle" } else { "harmonic" }),
                &[m],
                hc.pass,
                hc.difference,
                hc.bound,
            );
            r.note("u", u.to_string());
            r.note("v", v.to_string());
            out.push(r);
        }
    }

    let xxy = NCPoly::word(Word::z(3));
    let kc = eval.kernel_check(&xxy)?;
    out.push(numeric_report(
        "negative_control_zeta3",
        &[m],
        !kc.pass,
        kc.eval.value,
        kc.eval.total_error(),
    ));

    for (k, exact) in [(2u32, PI * PI / 6.0), (4, PI.powi(4) / 90.0)] {
        let r = eval.zeta(&Composition::new(vec![k])?)?;
        let diff = (r.value - exact).abs();
        out.push(numeric_report(
            "depth_one_pi",
            &[("k", k as u64), m],
            diff <= r.total_error(),
            diff,
            r.total_error(),
        ));
    }
    Ok(out)
}
