//! Floating-point evaluation of multiple zeta values with explicit tail
//! bounds, used to corroborate exact kernel claims numerically.
//!
//! `ζ(k_1, ..., k_n)` is summed over `m_1 > ... > m_n > 0` with `m_1 <= M` by
//! a running recursion over `m`: with `T_{n+1} = 1`,
//! `T_j(m) = T_j(m-1) + m^{-k_j} T_{j+1}(m-1)` and `ζ ≈ T_1(M)`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::composition::Composition;
use crate::error::{domain, Result};
use crate::poly::NCPoly;
use crate::products::Product;

pub const DEFAULT_CUTOFF: u64 = 1_000_000;

/// Floating round-off allowance per unit coefficient, per term and per level.
const ROUNDOFF_PER_TERM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    /// The truncated sum is within this of the exact value.
    pub tail_bound: f64,
    #[serde(rename = "M")]
    pub cutoff: u64,
    /// Allowance for floating error on top of the tail bound.
    #[serde(skip)]
    pub roundoff: f64,
}

impl EvalResult {
    pub fn exact(value: f64, cutoff: u64) -> EvalResult {
        EvalResult {
            value,
            tail_bound: 0.0,
            cutoff,
            roundoff: 0.0,
        }
    }

    /// `tail_bound + roundoff`.
    pub fn total_error(&self) -> f64 {
        self.tail_bound + self.roundoff
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// `2 (ln M + 1)^{n-1} M^{1-k_1} / (k_1 - 1)`.
pub fn tail_bound(c: &Composition, cutoff: u64) -> f64 {
    let m = cutoff as f64;
    let k1 = c.parts()[0] as f64;
    2.0 * (m.ln() + 1.0).powi(c.depth() as i32 - 1) * m.powf(1.0 - k1) / (k1 - 1.0)
}

pub fn zeta_num(c: &Composition, cutoff: u64) -> Result<EvalResult> {
    if !c.is_admissible() {
        return domain(format!("ζ{c} diverges: the first index must be at least 2"));
    }
    if cutoff < 10 {
        return domain(format!("cutoff M = {cutoff} is below the minimum of 10"));
    }
    let ks: Vec<i32> = c.parts().iter().map(|&k| k as i32).collect();
    let depth = ks.len();
    let mut levels = vec![CompensatedSum::default(); depth];
    for m in 1..=cutoff {
        let inv = 1.0 / m as f64;
        // Ascending j reads T_{j+1} before it is updated for this m.
        for j in 0..depth {
            let inner = if j + 1 < depth { levels[j + 1].value() } else { 1.0 };
            if inner == 0.0 {
                continue;
            }
            levels[j].add(inv.powi(ks[j]) * inner);
        }
    }
    Ok(EvalResult {
        value: levels[0].value(),
        tail_bound: tail_bound(c, cutoff),
        cutoff,
        roundoff: ROUNDOFF_PER_TERM * cutoff as f64 * depth as f64,
    })
}

/// Memoizing evaluator for a fixed cutoff; safe to share between threads.
pub struct ZetaEvaluator {
    cutoff: u64,
    cache: Mutex<HashMap<Composition, EvalResult>>,
}

impl ZetaEvaluator {
    pub fn new(cutoff: u64) -> ZetaEvaluator {
        ZetaEvaluator {
            cutoff,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn zeta(&self, c: &Composition) -> Result<EvalResult> {
        if let Some(hit) = self.cache.lock().unwrap().get(c) {
            return Ok(*hit);
        }
        let r = zeta_num(c, self.cutoff)?;
        self.cache.lock().unwrap().insert(c.clone(), r);
        Ok(r)
    }

    /// Linear extension of `z_{k_1}...z_{k_n} ↦ ζ(k_1, ..., k_n)` to `H^0`,
    /// with `1 ↦ 1`.
    pub fn z(&self, p: &NCPoly) -> Result<EvalResult> {
        if !p.membership().in_h0 {
            return domain(format!("{p} is not in H^0"));
        }
        let mut value = CompensatedSum::default();
        let mut tail = 0.0;
        let mut roundoff = 0.0;
        for (w, c) in p.terms() {
            let coeff = c.to_f64().expect("finite coefficient");
            if w.is_empty() {
                value.add(coeff);
                continue;
            }
            let r = self.zeta(&Composition::from_word(w)?)?;
            let scale = c.abs().to_f64().expect("finite coefficient");
            value.add(coeff * r.value);
            tail += scale * r.tail_bound;
            roundoff += scale * r.roundoff;
        }
        Ok(EvalResult {
            value: value.value(),
            tail_bound: tail,
            cutoff: self.cutoff,
            roundoff,
        })
    }

    pub fn kernel_check(&self, p: &NCPoly) -> Result<KernelCheck> {
        let eval = self.z(p)?;
        Ok(KernelCheck {
            pass: eval.value.abs() <= eval.total_error(),
            eval,
        })
    }

    /// Compares `Z(u ∘ v)` with `Z(u) Z(v)` within the propagated bounds.
    pub fn homomorphism_check(&self, u: &NCPoly, v: &NCPoly, product: Product) -> Result<HomomorphismCheck> {
        if product == Product::Concat {
            return domain("Z is multiplicative only for the shuffle and harmonic products");
        }
        let zu = self.z(u)?;
        let zv = self.z(v)?;
        let combined = self.z(&product.apply(u, v)?)?;
        let separate = zu.value * zv.value;
        let (eu, ev) = (zu.total_error(), zv.total_error());
        let bound = combined.total_error() + zu.value.abs() * ev + zv.value.abs() * eu + eu * ev;
        let difference = (combined.value - separate).abs();
        Ok(HomomorphismCheck {
            pass: difference <= bound,
            difference,
            bound,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelCheck {
    pub pass: bool,
    pub eval: EvalResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomomorphismCheck {
    pub pass: bool,
    pub difference: f64,
    pub bound: f64,
}

pub fn z_num(p: &NCPoly, cutoff: u64) -> Result<EvalResult> {
    ZetaEvaluator::new(cutoff).z(p)
}

/// `|Z(p)|` within its combined tail and round-off bound.
pub fn kernel_check(p: &NCPoly, cutoff: u64) -> Result<KernelCheck> {
    ZetaEvaluator::new(cutoff).kernel_check(p)
}

pub fn homomorphism_check(u: &NCPoly, v: &NCPoly, product: Product, cutoff: u64) -> Result<HomomorphismCheck> {
    ZetaEvaluator::new(cutoff).homomorphism_check(u, v, product)
}

/// Sum of `ζ` over a list of compositions, with summed bounds.
pub fn zeta_sum(eval: &ZetaEvaluator, comps: &[Composition]) -> Result<EvalResult> {
    let mut value = CompensatedSum::default();
    let mut tail = 0.0;
    let mut roundoff = 0.0;
    for c in comps {
        let r = eval.zeta(c)?;
        value.add(r.value);
        tail += r.tail_bound;
        roundoff += r.roundoff;
    }
    Ok(EvalResult {
        value: value.value(),
        tail_bound: tail,
        cutoff: eval.cutoff(),
        roundoff,
    })
}

/// Index sets of both sides of the restricted sum formula, built from
/// compositions rather than words.
///
/// Left: `ζ(k_1, ..., k_{b+1}, {1}^a)` over `k_1 + ... + k_{b+1} = k - a`,
/// `k_1 >= 2`. Right: `ζ(k'_1 + k - a - b - 1, k'_2, ..., k'_{a+1})` over
/// `k'_1 + ... + k'_{a+1} = a + b + 1`.
pub fn restricted_sum_indices(a: usize, b: usize, k: usize) -> Result<(Vec<Composition>, Vec<Composition>)> {
    if k < a + b + 2 {
        return domain(format!("restricted sum formula needs k >= a + b + 2, got a={a}, b={b}, k={k}"));
    }
    let lhs = Composition::all(k - a, b + 1)
        .into_iter()
        .filter(Composition::is_admissible)
        .map(|c| {
            let mut parts = c.parts().to_vec();
            parts.extend(std::iter::repeat_n(1, a));
            Composition::new(parts)
        })
        .collect::<Result<Vec<_>>>()?;
    let shift = (k - a - b - 1) as u32;
    let rhs = Composition::all(a + b + 1, a + 1)
        .into_iter()
        .map(|c| {
            let mut parts = c.parts().to_vec();
            parts[0] += shift;
            Composition::new(parts)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn comp(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn zeta_two_and_three() {
        let r = zeta_num(&comp("(2)"), 100_000).unwrap();
        assert!((r.value - PI * PI / 6.0).abs() <= r.total_error());
        assert!(r.value < PI * PI / 6.0);

        let coarse = zeta_num(&comp("(3)"), 10_000).unwrap();
        let fine = zeta_num(&comp("(3)"), 100_000).unwrap();
        assert!((coarse.value - fine.value).abs() <= coarse.tail_bound);
    }

    #[test]
    fn domain_errors() {
        assert!(zeta_num(&comp("(1,2)"), 1000).is_err());
        assert!(zeta_num(&comp("(2)"), 5).is_err());
        assert!(z_num(&"y".parse().unwrap(), 1000).is_err());
    }

    #[test]
    fn unit_maps_to_one() {
        let r = z_num(&NCPoly::one(), 1000).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.tail_bound, 0.0);
    }

    #[test]
    fn euler_relation() {
        // ζ(3) = ζ(2,1)
        let r = kernel_check(&"xxy - xyy".parse().unwrap(), 100_000).unwrap();
        assert!(r.pass, "{:?}", r);
        let r = kernel_check(&"xxy".parse().unwrap(), 100_000).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn depth_two_by_brute_force() {
        // ζ(2,1) truncated at M, by direct double summation.
        let m = 2000u64;
        let mut brute = 0.0;
        for m1 in 1..=m {
            for m2 in 1..m1 {
                brute += 1.0 / ((m1 * m1) as f64 * m2 as f64);
            }
        }
        let r = zeta_num(&comp("(2,1)"), m).unwrap();
        assert!((r.value - brute).abs() < 1e-12);
    }

    #[test]
    fn restricted_sum_index_sets() {
        // a=1, b=1, k=4: ζ(2,1,1) vs ζ(3,1) + ζ(2,2)
        let (l, r) = restricted_sum_indices(1, 1, 4).unwrap();
        assert_eq!(l, vec![comp("(2,1,1)")]);
        assert_eq!(r, vec![comp("(2,2)"), comp("(3,1)")]);
        // a=0: the sum formula at depth b+1 against ζ(k).
        let (l, r) = restricted_sum_indices(0, 1, 4).unwrap();
        assert_eq!(l, vec![comp("(2,2)"), comp("(3,1)")]);
        assert_eq!(r, vec![comp("(4)")]);
        assert!(restricted_sum_indices(2, 2, 5).is_err());
    }

    #[test]
    fn eval_result_json() {
        let r = EvalResult::exact(1.0, 1000);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"value":1.0,"tail_bound":0.0,"M":1000}"#
        );
    }
}
