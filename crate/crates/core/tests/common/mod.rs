//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sigmaint::groebner::GroebnerBasis;
use sigmaint::poly::{Monomial, MonomialOrder, Polynomial, Rational, Ring};

pub fn random_poly(rng: &mut ChaCha8Rng, ring: &Arc<Ring>, terms: usize, max_deg: u32, coeff: i64) -> Polynomial {
    let n = ring.nvars();
    Polynomial::from_terms(
        ring,
        (0..terms).map(|_| {
            let mut e = vec![0u32; n];
            let deg = rng.gen_range(0..=max_deg);
            for _ in 0..deg {
                e[rng.gen_range(0..n)] += 1;
            }
            let c = rng.gen_range(-coeff..=coeff);
            (Monomial::from_exponents(&e), Rational::from_integer(c.into()))
        }),
    )
}

/// Two or three variables with as many dense low-degree generators; almost
/// always zero-dimensional.
pub fn random_ideal(rng: &mut ChaCha8Rng) -> Vec<Polynomial> {
    let nvars = rng.gen_range(2..=3);
    let names = ["x", "y", "z"];
    let ring = Ring::new(&names[..nvars]);
    (0..nvars)
        .map(|_| loop {
            let p = random_poly(rng, &ring, 5, 2, 5);
            if p.total_degree().unwrap_or(0) >= 1 {
                break p;
            }
        })
        .collect()
}

pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Polynomial {
    let (mf, cf) = f.leading_term(order).expect("nonzero");
    let (mg, cg) = g.leading_term(order).expect("nonzero");
    let l = mf.lcm(mg);
    let a = f.mul_monomial(&mf.quotient_of(&l).unwrap()).scale(&cf.recip());
    let b = g.mul_monomial(&mg.quotient_of(&l).unwrap()).scale(&cg.recip());
    &a - &b
}

/// Checks the defining properties of a reduced Gröbner basis of the ideal
/// generated by `inputs`, without trusting the engine's own bookkeeping
/// beyond `normal_form`.
pub fn check_reduced_basis(gb: &GroebnerBasis, inputs: &[Polynomial]) -> Result<(), String> {
    let order = gb.order();
    let gens = gb.generators();
    for p in inputs {
        if !gb.normal_form(p).unwrap().is_zero() {
            return Err(format!("input {p} does not reduce to 0"));
        }
    }
    for (i, g) in gens.iter().enumerate() {
        let (_, lc) = g.leading_term(order).ok_or("zero element")?;
        if !lc.is_one() {
            return Err(format!("{g} is not monic"));
        }
        for (j, h) in gens.iter().enumerate() {
            if i == j {
                continue;
            }
            let (hm, _) = h.leading_term(order).unwrap();
            if g.terms().any(|(m, _)| hm.divides(m)) {
                return Err(format!("{g} is not reduced against {h}"));
            }
        }
        for h in &gens[i + 1..] {
            let s = s_polynomial(g, h, order);
            if !gb.normal_form(&s).unwrap().is_zero() {
                return Err(format!("S({g}, {h}) does not reduce to 0"));
            }
        }
    }
    Ok(())
}

/// Determinant by Laplace expansion along the first row, memoized on the
/// set of remaining columns.
pub fn laplace_det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    fn go(a: &[Vec<BigInt>], row: usize, cols: u32, memo: &mut HashMap<u32, BigInt>) -> BigInt {
        if row == a.len() {
            return BigInt::one();
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = BigInt::zero();
        let mut sign = 1;
        for c in 0..a.len() {
            if cols & (1 << c) == 0 {
                continue;
            }
            if !a[row][c].is_zero() {
                let sub = go(a, row + 1, cols & !(1 << c), memo);
                let t = &a[row][c] * sub;
                if sign > 0 {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
            sign = -sign;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    go(a, 0, (1u32 << n) - 1, &mut HashMap::new())
}

pub fn sign(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if *x > BigInt::zero() {
        1
    } else {
        -1
    }
}
