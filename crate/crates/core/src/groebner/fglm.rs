//! FGLM change of order for zero-dimensional ideals.
//!
//! Monomials are visited in increasing target order. Each one is either a
//! new standard monomial (its class is independent of the earlier ones) or
//! the leading monomial of a new basis element (its class is a combination
//! of earlier standard monomials).

use std::sync::Arc;

use num_traits::{One, Zero};

use super::{GroebnerBasis, QuotientAlgebra};
use crate::poly::{Monomial, MonomialOrder, Polynomial, Rational, Ring};

struct EchelonRow {
    pivot: usize,
    vec: Vec<Rational>,
    // vec = sum_j combo[j] * class(new_std[j])
    combo: Vec<Rational>,
}

/// Reduced basis of the same ideal as `q.gb()` under `target`.
pub fn fglm(q: &QuotientAlgebra, target: MonomialOrder) -> GroebnerBasis {
    let ring: Arc<Ring> = q.gb().ring().clone();
    let nvars = ring.nvars();
    if q.dim() == 0 {
        return GroebnerBasis::from_reduced(&ring, target, vec![Polynomial::one(&ring)]);
    }
    let table = q.multiplication_table();
    let one = Monomial::one(nvars);

    let mut std_monos: Vec<Monomial> = Vec::new();
    let mut rows: Vec<EchelonRow> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    let mut basis: Vec<Polynomial> = Vec::new();

    let mut class_one = vec![Rational::zero(); q.dim()];
    class_one[q.index_of(&one).expect("1 is standard")] = Rational::one();
    // candidates carry the class of the monomial they stand for
    let mut candidates: Vec<(Monomial, Vec<Rational>)> = vec![(one, class_one)];

    while !candidates.is_empty() {
        let best = (1..candidates.len()).fold(0, |b, k| {
            if target.cmp(&candidates[k].0, &candidates[b].0).is_lt() {
                k
            } else {
                b
            }
        });
        let (m, class) = candidates.swap_remove(best);
        if leads.iter().any(|l| l.divides(&m)) {
            continue;
        }

        let mut w = class.clone();
        let mut acc = vec![Rational::zero(); std_monos.len()];
        for row in &rows {
            let c = w[row.pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (wi, ri) in w.iter_mut().zip(&row.vec) {
                if !ri.is_zero() {
                    *wi -= &c * ri;
                }
            }
            for (a, r) in acc.iter_mut().zip(&row.combo) {
                if !r.is_zero() {
                    *a += &c * r;
                }
            }
        }

        match w.iter().position(|c| !c.is_zero()) {
            None => {
                // class(m) = sum acc[j] * class(std_j)
                let mut p = Polynomial::monomial(&ring, m.clone(), Rational::one());
                for (s, c) in std_monos.iter().zip(&acc) {
                    if !c.is_zero() {
                        p.add_term(s.clone(), -c.clone());
                    }
                }
                leads.push(m);
                basis.push(p);
            }
            Some(pivot) => {
                let inv = w[pivot].recip();
                let vec: Vec<Rational> = w.iter().map(|c| c * &inv).collect();
                let mut combo: Vec<Rational> = acc.iter().map(|c| -(c * &inv)).collect();
                combo.push(inv);
                rows.push(EchelonRow { pivot, vec, combo });
                for row in &mut rows {
                    row.combo.resize(std_monos.len() + 1, Rational::zero());
                }
                for v in 0..nvars {
                    let next = m.mul_var(v);
                    if candidates.iter().any(|(c, _)| c == &next) {
                        continue;
                    }
                    let mut next_class = vec![Rational::zero(); q.dim()];
                    for (j, cj) in class.iter().enumerate() {
                        if cj.is_zero() {
                            continue;
                        }
                        for (i, t) in &table[v][j] {
                            next_class[*i] += cj * t;
                        }
                    }
                    candidates.push((next, next_class));
                }
                std_monos.push(m);
            }
        }
    }
    debug_assert_eq!(std_monos.len(), q.dim());
    GroebnerBasis::from_reduced(&ring, target, basis)
}
