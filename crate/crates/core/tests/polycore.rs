use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use sigmaint::poly::{parse_polynomial, Monomial, MonomialOrder, Polynomial, Rational, Ring};

fn ring() -> Arc<Ring> {
    Ring::new(&["x", "y", "z"])
}

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=6).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn exps() -> impl Strategy<Value = [u32; 3]> {
    [0u32..=3, 0u32..=3, 0u32..=3]
}

fn raw_terms(max: usize) -> impl Strategy<Value = Vec<([u32; 3], Rational)>> {
    prop::collection::vec((exps(), rational()), 0..max)
}

fn build(terms: &[([u32; 3], Rational)]) -> Polynomial {
    Polynomial::from_terms(
        &ring(),
        terms.iter().map(|(e, c)| (Monomial::from_exponents(e), c.clone())),
    )
}

fn poly() -> impl Strategy<Value = Polynomial> {
    raw_terms(7).prop_map(|t| build(&t))
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), 3)
}

// naive convolution over an exponent-keyed map
fn convolve(a: &[([u32; 3], Rational)], b: &[([u32; 3], Rational)]) -> BTreeMap<[u32; 3], Rational> {
    let mut out: BTreeMap<[u32; 3], Rational> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn term_sum(terms: &[([u32; 3], Rational)], at: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (e, c) in terms {
        let mut t = c.clone();
        for (v, k) in at.iter().zip(e) {
            for _ in 0..*k {
                t *= v;
            }
        }
        acc += t;
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &Polynomial::one(&ring()), p.clone());
    }

    #[test]
    fn product_matches_naive_convolution(a in raw_terms(6), b in raw_terms(6)) {
        let prod = &build(&a) * &build(&b);
        let expect = convolve(&a, &b);
        prop_assert_eq!(prod.len(), expect.len());
        for (e, c) in &expect {
            prop_assert_eq!(&prod.coefficient(&Monomial::from_exponents(e)), c);
        }
    }

    #[test]
    fn canonical_print_parses_back(p in poly()) {
        let text = p.to_string();
        prop_assert_eq!(parse_polynomial(&text, &ring()).unwrap(), p);
    }

    #[test]
    fn orders_are_total_multiplicative_well_orders(a in exps(), b in exps(), c in exps()) {
        let (a, b, c) = (
            Monomial::from_exponents(&a),
            Monomial::from_exponents(&b),
            Monomial::from_exponents(&c),
        );
        for order in [MonomialOrder::DegRevLex, MonomialOrder::Lex] {
            let ab = order.cmp(&a, &b);
            prop_assert_eq!(ab, order.cmp(&b, &a).reverse());
            prop_assert_eq!(ab.is_eq(), a == b);
            if ab.is_lt() {
                prop_assert!(order.cmp(&a.mul(&c), &b.mul(&c)).is_lt());
            }
            prop_assert!(!order.cmp(&a, &Monomial::one(3)).is_lt());
        }
    }

    #[test]
    fn leibniz_rule(p in poly(), q in poly(), v in 0usize..3) {
        let lhs = (&p * &q).derivative(v);
        let rhs = &(&p * &q.derivative(v)) + &(&q * &p.derivative(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(p in poly(), q in poly(), at in point()) {
        let ev = |f: &Polynomial| f.eval_rational(&at).unwrap();
        prop_assert_eq!(ev(&(&p * &q)), ev(&p) * ev(&q));
        prop_assert_eq!(ev(&(&p + &q)), ev(&p) + ev(&q));
    }

    #[test]
    fn evaluation_matches_term_summation(t in raw_terms(8), at in point()) {
        prop_assert_eq!(build(&t).eval_rational(&at).unwrap(), term_sum(&t, &at));
    }

    #[test]
    fn float_evaluation_tracks_exact(p in poly(), at in point()) {
        use num_traits::ToPrimitive;
        let exact = p.eval_rational(&at).unwrap().to_f64().unwrap();
        let approx = p
            .eval_f64(&at.iter().map(|c| c.to_f64().unwrap()).collect::<Vec<_>>())
            .unwrap();
        prop_assert!((exact - approx).abs() <= 1e-9 * (1.0 + exact.abs()));
    }
}

#[test]
fn zero_polynomial_evaluates_to_zero() {
    let z = Polynomial::zero(&ring());
    let at = vec![Rational::one(); 3];
    assert!(z.eval_rational(&at).unwrap().is_zero());
}
