//! Derivations, automorphisms and the parameter-dependent operators acting
//! on `H` and on truncated series over it.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{domain, Result};
use crate::poly::NCPoly;
use crate::products::shuffle;
use crate::series::{degree, ParamSeries, Param};
use crate::word::{Letter, Word};
use crate::Rational;

/// The derivation determined by the images of `x` and `y`, applied through
/// the Leibniz rule letter by letter.
pub fn derivation(p: &NCPoly, image_x: &NCPoly, image_y: &NCPoly) -> NCPoly {
    p.map_words(|w| {
        let mut out = NCPoly::zero();
        for (i, l) in w.letters().enumerate() {
            let image = match l {
                Letter::X => image_x,
                Letter::Y => image_y,
            };
            let left = NCPoly::word(w.prefix(i));
            let right = NCPoly::word(w.suffix(i + 1));
            out += left.concat(image).concat(&right);
        }
        out
    })
}

/// The concatenation endomorphism determined by the images of `x` and `y`.
pub fn endomorphism(p: &NCPoly, image_x: &NCPoly, image_y: &NCPoly) -> NCPoly {
    p.map_words(|w| {
        w.letters().fold(NCPoly::one(), |acc, l| match l {
            Letter::X => acc.concat(image_x),
            Letter::Y => acc.concat(image_y),
        })
    })
}

/// `x z^{n-1} y`.
fn partial_image(n: usize) -> NCPoly {
    NCPoly::x().concat(&NCPoly::z().pow(n - 1)).concat(&NCPoly::y())
}

/// The derivation `∂_n` with `∂_n(x) = x z^{n-1} y = -∂_n(y)`.
pub fn partial_n(p: &NCPoly, n: usize) -> Result<NCPoly> {
    if n < 1 {
        return domain("∂_n needs n >= 1");
    }
    let image = partial_image(n);
    Ok(derivation(p, &image, &-&image))
}

/// `d(w) = y ш w - y w`.
pub fn dmap(p: &NCPoly) -> NCPoly {
    let y = NCPoly::y();
    shuffle(&y, p) - y.concat(p)
}

/// The involution with `x ↦ x + y`, `y ↦ -y`.
pub fn phi(p: &NCPoly) -> NCPoly {
    endomorphism(p, &NCPoly::z(), &-NCPoly::y())
}

/// Left multiplication by `x`.
pub fn lx(p: &NCPoly) -> NCPoly {
    NCPoly::x().concat(p)
}

/// `exp(Σ_{n>=1} ∂_n / n)` applied to `p`, discarding everything of weight
/// above `weight_cap`. Each `∂_n` raises weight by `n`, so the series is finite.
pub fn exp_derivation_sum(p: &NCPoly, weight_cap: usize) -> NCPoly {
    let images: Vec<(NCPoly, NCPoly)> = (1..=weight_cap)
        .map(|n| {
            let image = partial_image(n).scale(&Rational::new(BigInt::one(), BigInt::from(n)));
            let neg = -&image;
            (image, neg)
        })
        .collect();
    let apply_sum = |q: &NCPoly| -> NCPoly {
        let Some(lo) = q.min_weight() else {
            return NCPoly::zero();
        };
        let mut out = NCPoly::zero();
        for (n, (ix, iy)) in images.iter().enumerate() {
            if lo + n + 1 > weight_cap {
                break;
            }
            let src = q.truncate_weight(weight_cap - n - 1);
            out += derivation(&src, ix, iy);
        }
        out
    };
    let mut total = p.truncate_weight(weight_cap);
    let mut term = total.clone();
    let mut m = 0i64;
    loop {
        m += 1;
        term = apply_sum(&term).scale(&Rational::new(BigInt::one(), BigInt::from(m)));
        if term.is_zero() {
            return total;
        }
        total += &term;
    }
}

/// Applies the concatenation endomorphism with letter images given as series
/// to every coefficient of `s`, keeping the parameter monomials in place.
pub fn series_endomorphism(
    s: &ParamSeries,
    image_x: &ParamSeries,
    image_y: &ParamSeries,
) -> Result<ParamSeries> {
    let cap = s.cap();
    let mut cache: HashMap<Word, ParamSeries> = HashMap::new();
    cache.insert(Word::EMPTY, ParamSeries::one(cap));
    let mut out = ParamSeries::zero(cap);
    if let Some(w) = s.weight_cap() {
        out = out.with_weight_cap(w);
    }
    for (e, p) in s.terms() {
        for (w, c) in p.terms() {
            let image = word_image(*w, image_x, image_y, &mut cache)?;
            out = out + image.scale(c).shift(*e);
        }
    }
    Ok(out)
}

fn word_image(
    w: Word,
    image_x: &ParamSeries,
    image_y: &ParamSeries,
    cache: &mut HashMap<Word, ParamSeries>,
) -> Result<ParamSeries> {
    if let Some(hit) = cache.get(&w) {
        return Ok(hit.clone());
    }
    let head = word_image(w.prefix(w.len() - 1), image_x, image_y, cache)?;
    let last = match w.last().unwrap() {
        Letter::X => image_x,
        Letter::Y => image_y,
    };
    let image = head.concat(last)?;
    cache.insert(w, image.clone());
    Ok(image)
}

/// `1/(1 + yY)`.
pub fn inv_one_plus_y(cap: u32) -> ParamSeries {
    ParamSeries::geometric(&-NCPoly::y(), Param::Y, cap).expect("seed has no constant term")
}

/// `1/(1 - yY)`.
pub fn inv_one_minus_y(cap: u32) -> ParamSeries {
    ParamSeries::geometric(&NCPoly::y(), Param::Y, cap).expect("seed has no constant term")
}

/// `Δ`: `x ↦ x·1/(1-yY)`, `z ↦ z`, hence `y ↦ z - x·1/(1-yY)`.
pub fn delta_y(s: &ParamSeries) -> Result<ParamSeries> {
    let cap = s.cap();
    let image_x = inv_one_minus_y(cap).left_mul(&NCPoly::x());
    let image_y = ParamSeries::constant(NCPoly::z(), cap) - image_x.clone();
    series_endomorphism(s, &image_x, &image_y)
}

/// `exp(±dY) = Σ_m (±Y)^m d^m / m!`, by iterating `d` on each coefficient.
pub fn exp_dy(s: &ParamSeries, sign: i32) -> ParamSeries {
    exp_d(s, Param::Y, sign)
}

/// `exp(±dP)` for any parameter `P`.
pub fn exp_d(s: &ParamSeries, param: Param, sign: i32) -> ParamSeries {
    assert!(sign == 1 || sign == -1, "sign must be ±1");
    let cap = s.cap();
    let mut out = ParamSeries::zero(cap);
    if let Some(w) = s.weight_cap() {
        out = out.with_weight_cap(w);
    }
    for (e, p) in s.terms() {
        let room = cap - degree(e);
        let mut term = p.clone();
        let mut factor = Rational::one();
        out.add_at(*e, term.clone());
        for m in 1..=room {
            term = dmap(&term);
            if term.is_zero() {
                break;
            }
            factor *= Rational::new(BigInt::from(sign), BigInt::from(m));
            let mut shifted = *e;
            shifted[param.index()] += m;
            out.add_at(shifted, term.scale(&factor));
        }
    }
    out
}

/// Closed multiplicative form of `exp(±dY)`: `x ↦ x/(1∓yY)`, `y ↦ y/(1∓yY)`.
pub fn exp_dy_closed(s: &ParamSeries, sign: i32) -> Result<ParamSeries> {
    assert!(sign == 1 || sign == -1, "sign must be ±1");
    let cap = s.cap();
    let seed = NCPoly::y().scale(&Rational::from_integer(BigInt::from(sign)));
    let geo = ParamSeries::geometric(&seed, Param::Y, cap)?;
    series_endomorphism(s, &geo.left_mul(&NCPoly::x()), &geo.left_mul(&NCPoly::y()))
}

/// `Φ(w) = (1 + yY)(1/(1+yY) * w)` on `H^1`-valued series.
pub fn phi_yy(s: &ParamSeries) -> Result<ParamSeries> {
    s.check_h1()?;
    let cap = s.cap();
    let h = inv_one_plus_y(cap);
    let mut one_plus_y = ParamSeries::one(cap);
    one_plus_y.add_at(Param::Y.exponent(1), NCPoly::y());
    one_plus_y.concat(&h.harmonic(s)?)
}

/// `Φ` extended to all of `H`: every word is `w x^m` with `w ∈ H^1`, and
/// `Φ(w x^m) = Φ(w) x^m` since `Φ(x) = x`.
pub fn phi_yy_extended(s: &ParamSeries) -> Result<ParamSeries> {
    let mut by_tail: HashMap<usize, ParamSeries> = HashMap::new();
    for (e, p) in s.terms() {
        for (w, c) in p.terms() {
            let m = w.trailing_x();
            let head = w.prefix(w.len() - m);
            by_tail
                .entry(m)
                .or_insert_with(|| ParamSeries::zero(s.cap()))
                .add_at(*e, NCPoly::term(c.clone(), head));
        }
    }
    let mut tails: Vec<_> = by_tail.into_iter().collect();
    tails.sort_by_key(|(m, _)| *m);
    let mut out = ParamSeries::zero(s.cap());
    for (m, part) in tails {
        let x_m = NCPoly::word(Word::repeat(Letter::X, m));
        out = out + phi_yy(&part)?.right_mul(&x_m);
    }
    Ok(match s.weight_cap() {
        Some(w) => out.with_weight_cap(w),
        None => out,
    })
}

/// `Φ` through its generator images: `x ↦ x`, `z ↦ z/(1+yY)`, so
/// `y ↦ z/(1+yY) - x`.
pub fn phi_yy_multiplicative(s: &ParamSeries) -> Result<ParamSeries> {
    let cap = s.cap();
    let image_x = ParamSeries::constant(NCPoly::x(), cap);
    let image_y = inv_one_plus_y(cap).left_mul(&NCPoly::z()) - image_x.clone();
    series_endomorphism(s, &image_x, &image_y)
}

/// `Φ^{-1}(s) = g * (h·s)` with `h = 1/(1+yY)` and `g` the harmonic inverse of `h`.
pub fn phi_yy_inv(s: &ParamSeries) -> Result<ParamSeries> {
    s.check_h1()?;
    let h = inv_one_plus_y(s.cap());
    let g = h.harmonic_inverse()?;
    g.harmonic(&h.concat(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    fn p(s: &str) -> NCPoly {
        s.parse().unwrap()
    }

    fn c(s: &str, cap: u32) -> ParamSeries {
        ParamSeries::constant(p(s), cap)
    }

    #[test]
    fn partial_leaves_h0_only_from_outside_h0() {
        let img = partial_n(&p("yx"), 1).unwrap();
        assert_eq!(img.to_string(), "-xyx + yxy");
        assert!(!img.membership().in_h0);
        assert!(partial_n(&p("xxyxy"), 3).unwrap().membership().in_h0);
    }

    #[test]
    fn partial_examples() {
        assert_eq!(partial_n(&p("x"), 1).unwrap(), p("xy"));
        assert_eq!(partial_n(&p("xy"), 1).unwrap(), p("xyy - xxy"));
        assert_eq!(partial_n(&NCPoly::one(), 3).unwrap(), NCPoly::zero());
        assert!(partial_n(&p("x"), 0).is_err());
        assert_eq!(partial_n(&p("xy"), 2).unwrap(), p("xyyy - xxxy"));
    }

    #[test]
    fn dmap_examples() {
        assert_eq!(dmap(&p("x")), p("xy"));
        assert_eq!(dmap(&p("y")), p("yy"));
        assert_eq!(dmap(&NCPoly::one()), NCPoly::zero());
    }

    #[test]
    fn phi_and_lx_examples() {
        assert_eq!(phi(&p("x")), p("x + y"));
        assert_eq!(phi(&p("xy")), p("-xy - yy"));
        assert_eq!(phi(&phi(&p("xxy"))), p("xxy"));
        assert_eq!(lx(&p("y")), p("xy"));
        assert_eq!(lx(&NCPoly::one()), p("x"));
        assert_eq!(lx(&p("yy + y")), p("xyy + xy"));
    }

    #[test]
    fn delta_examples() {
        let d = delta_y(&c("x", 3)).unwrap();
        assert_eq!(d.coeff([0, 1, 0]), p("xy"));
        let d = delta_y(&ParamSeries::constant(NCPoly::z(), 3)).unwrap();
        assert_eq!(d, ParamSeries::constant(NCPoly::z(), 3));
        assert!(delta_y(&ParamSeries::one(3)).unwrap().is_one());
    }

    #[test]
    fn exp_dy_examples() {
        assert_eq!(exp_dy(&c("x", 3), 1).coeff([0, 1, 0]), p("xy"));
        assert_eq!(exp_dy(&c("y", 3), 1).coeff([0, 1, 0]), p("yy"));
        let w = c("xxy", 5);
        assert_eq!(exp_dy(&exp_dy(&w, 1), -1), w);
        assert_eq!(exp_dy(&w, -1), exp_dy_closed(&w, -1).unwrap());
    }

    #[test]
    fn phi_yy_examples() {
        // Φ(x) = x: x is outside H^1, so use the extension.
        let s = phi_yy_extended(&c("x", 4)).unwrap();
        assert_eq!(s, c("x", 4));
        assert!(phi_yy(&c("x", 4)).is_err());
        let s = phi_yy_extended(&ParamSeries::constant(NCPoly::z(), 4)).unwrap();
        assert_eq!(s.coeff([0, 1, 0]), p("-xy - yy"));
        assert!(phi_yy(&ParamSeries::one(4)).unwrap().is_one());
    }

    #[test]
    fn phi_yy_inv_examples() {
        let s = phi_yy_inv(&c("-y", 4)).unwrap();
        assert_eq!(s.coeff([0, 0, 0]), p("-y"));
        assert_eq!(s.coeff([0, 1, 0]), p("-yy - xy"));
        let xy = c("xy", 4);
        assert_eq!(phi_yy_inv(&phi_yy(&xy).unwrap()).unwrap(), xy);
        assert!(phi_yy_inv(&c("yx", 4)).is_err());
    }

    #[test]
    fn exp_derivation_sum_examples() {
        assert_eq!(exp_derivation_sum(&p("xy"), 2), p("xy"));
        assert_eq!(exp_derivation_sum(&p("xy"), 3), p("xy + xyy - xxy"));
        assert_eq!(exp_derivation_sum(&NCPoly::zero(), 7), NCPoly::zero());
    }

    #[test]
    fn exp_derivation_sum_second_order() {
        // Weight-4 part of exp(D)(xy): ∂_2(xy)/2 + ∂_1(∂_1(xy))/2.
        let d1 = partial_n(&p("xy"), 1).unwrap();
        let expected = partial_n(&p("xy"), 2).unwrap().scale(&ratio(1, 2))
            + partial_n(&d1, 1).unwrap().scale(&ratio(1, 2));
        assert_eq!(exp_derivation_sum(&p("xy"), 4).weight_project(4), expected);
    }
}
