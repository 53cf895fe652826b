use mzv_core::operators::{
    dmap, exp_dy, exp_dy_closed, partial_n, phi, phi_yy, phi_yy_inv, phi_yy_multiplicative,
};
use mzv_core::poly::rat;
use mzv_core::products::{harmonic, shuffle};
use mzv_core::{Letter, NCPoly, Param, ParamSeries, Product, Word};
use proptest::prelude::*;

fn word(max_len: usize) -> impl Strategy<Value = Word> + Clone {
    prop::collection::vec(any::<bool>(), 0..=max_len).prop_map(|bits| {
        Word::from_letters(bits.into_iter().map(|b| if b { Letter::Y } else { Letter::X }))
    })
}

fn h1_word(max_len: usize) -> impl Strategy<Value = Word> + Clone {
    word(max_len).prop_map(|w| if w.is_empty() { w } else { w.prefix(w.len() - 1).push(Letter::Y) })
}

fn poly_from(words: impl Strategy<Value = Word> + Clone, max_terms: usize) -> impl Strategy<Value = NCPoly> + Clone {
    prop::collection::vec((words, -3i64..=3), 0..=max_terms).prop_map(|terms| {
        NCPoly::from_terms(terms.into_iter().map(|(w, c)| (w, rat(c))))
    })
}

fn poly(max_len: usize, max_terms: usize) -> impl Strategy<Value = NCPoly> + Clone {
    poly_from(word(max_len), max_terms)
}

fn h1_poly(max_len: usize, max_terms: usize) -> impl Strategy<Value = NCPoly> + Clone {
    poly_from(h1_word(max_len), max_terms)
}

/// Series with coefficients drawn from `coeff` at random exponents of degree <= cap.
fn series(coeff: impl Strategy<Value = NCPoly> + Clone, cap: u32) -> impl Strategy<Value = ParamSeries> {
    let exps = prop::collection::vec((0..=cap, 0..=cap, 0..=cap), 0..=4);
    (exps, prop::collection::vec(coeff, 4)).prop_map(move |(es, cs)| {
        let mut s = ParamSeries::zero(cap);
        for ((a, b, c), p) in es.into_iter().zip(cs) {
            if a + b + c <= cap {
                s.add_at([a, b, c], p);
            }
        }
        s
    })
}

fn unit_h1_series(cap: u32) -> impl Strategy<Value = ParamSeries> {
    series(h1_poly(3, 2), cap).prop_map(move |s| {
        let mut s = s;
        let c0 = s.coeff([0, 0, 0]);
        s.add_at([0, 0, 0], NCPoly::one() - c0);
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn shuffle_laws(p in poly(3, 3), q in poly(3, 3), r in poly(3, 3)) {
        prop_assert_eq!(shuffle(&p, &q), shuffle(&q, &p));
        prop_assert_eq!(shuffle(&shuffle(&p, &q), &r), shuffle(&p, &shuffle(&q, &r)));
        prop_assert_eq!(shuffle(&p, &(q.clone() + r.clone())), shuffle(&p, &q) + shuffle(&p, &r));
        prop_assert_eq!(shuffle(&NCPoly::one(), &p), p);
    }

    #[test]
    fn harmonic_laws(p in h1_poly(3, 3), q in h1_poly(3, 3), r in h1_poly(3, 3)) {
        let pq = harmonic(&p, &q).unwrap();
        prop_assert_eq!(&pq, &harmonic(&q, &p).unwrap());
        prop_assert_eq!(harmonic(&pq, &r).unwrap(), harmonic(&p, &harmonic(&q, &r).unwrap()).unwrap());
        prop_assert!(pq.membership().in_h1);
        prop_assert_eq!(harmonic(&NCPoly::one(), &p).unwrap(), p);
    }

    #[test]
    fn harmonic_closes_on_h0(u in word(4), v in word(4)) {
        let wrap = |w: Word| NCPoly::word(w.prepend(Letter::X).push(Letter::Y));
        let (p, q) = (wrap(u), wrap(v));
        prop_assert!(harmonic(&p, &q).unwrap().membership().in_h0);
        prop_assert!(shuffle(&p, &q).membership().in_h0);
    }

    #[test]
    fn leibniz(p in poly(5, 3), q in poly(5, 3), n in 1usize..=4) {
        let lhs = partial_n(&p.concat(&q), n).unwrap();
        let rhs = partial_n(&p, n).unwrap().concat(&q) + p.concat(&partial_n(&q, n).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(dmap(&p.concat(&q)), dmap(&p).concat(&q) + p.concat(&dmap(&q)));
    }

    #[test]
    fn partial_raises_weight_and_lands_in_h0(u in word(5), n in 1usize..=5) {
        let w = u.prepend(Letter::X).push(Letter::Y);
        let img = partial_n(&NCPoly::word(w), n).unwrap();
        prop_assert!(img.membership().in_h0);
        prop_assert!(img.is_zero() || img.homogeneous_weight() == Some(w.weight() + n));
    }

    #[test]
    fn phi_involutive_and_multiplicative(p in poly(6, 3), q in poly(6, 3)) {
        prop_assert_eq!(phi(&phi(&p)), p.clone());
        prop_assert_eq!(phi(&p.concat(&q)), phi(&p).concat(&phi(&q)));
    }

    #[test]
    fn truncation_is_a_ring_congruence(
        s in series(poly(3, 2), 5),
        t in series(poly(3, 2), 5),
        low in 0u32..=5,
    ) {
        for product in [Product::Concat, Product::Shuffle] {
            let full = s.product(&t, product).unwrap().with_cap(low);
            let early = s.with_cap(low).product(&t.with_cap(low), product).unwrap();
            prop_assert_eq!(full, early);
        }
    }

    #[test]
    fn harmonic_truncation_is_a_ring_congruence(
        s in series(h1_poly(3, 2), 5),
        t in series(h1_poly(3, 2), 5),
        low in 0u32..=5,
    ) {
        let full = s.harmonic(&t).unwrap().with_cap(low);
        let early = s.with_cap(low).harmonic(&t.with_cap(low)).unwrap();
        prop_assert_eq!(full, early);
    }

    #[test]
    fn harmonic_inverse_round_trip(s in unit_h1_series(4)) {
        let inv = s.harmonic_inverse().unwrap();
        prop_assert!(s.harmonic(&inv).unwrap().is_one());
        prop_assert!(inv.harmonic(&s).unwrap().is_one());
    }

    #[test]
    fn geometric_inverts_one_minus_seed(seed in poly(2, 2).prop_filter("no constant", |p| p.constant_term() == rat(0))) {
        for param in [Param::X, Param::Y, Param::Z] {
            let g = ParamSeries::geometric(&seed, param, 5).unwrap();
            let one_minus = ParamSeries::one(5) - ParamSeries::monomial(seed.clone(), param.exponent(1), 5);
            prop_assert!(one_minus.concat(&g).unwrap().is_one());
            prop_assert!(g.concat(&one_minus).unwrap().is_one());
        }
    }

    #[test]
    fn phi_yy_routes_agree_and_multiply(s in series(h1_poly(3, 2), 4), t in series(h1_poly(3, 2), 4)) {
        prop_assert_eq!(phi_yy(&s).unwrap(), phi_yy_multiplicative(&s).unwrap());
        let st = s.concat(&t).unwrap();
        prop_assert_eq!(phi_yy(&st).unwrap(), phi_yy(&s).unwrap().concat(&phi_yy(&t).unwrap()).unwrap());
    }

    #[test]
    fn phi_yy_round_trip(s in series(h1_poly(3, 2), 4)) {
        prop_assert_eq!(phi_yy(&phi_yy_inv(&s).unwrap()).unwrap(), s.clone());
        prop_assert_eq!(phi_yy_inv(&phi_yy(&s).unwrap()).unwrap(), s);
    }

    #[test]
    fn exp_dy_routes_agree(p in poly(4, 3)) {
        let s = ParamSeries::constant(p, 5);
        for sign in [1, -1] {
            prop_assert_eq!(exp_dy(&s, sign), exp_dy_closed(&s, sign).unwrap());
        }
        prop_assert_eq!(exp_dy(&exp_dy(&s, 1), -1), s);
    }

    #[test]
    fn text_form_round_trips(p in poly(8, 5)) {
        let back: NCPoly = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn exp_dy_of_letters_is_geometric() {
    let cap = 6;
    let g = ParamSeries::geometric(&NCPoly::y(), Param::Y, cap).unwrap();
    for letter in [NCPoly::x(), NCPoly::y()] {
        let s = ParamSeries::constant(letter.clone(), cap);
        assert_eq!(exp_dy(&s, 1), g.left_mul(&letter));
    }
}
