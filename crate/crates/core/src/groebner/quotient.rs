use std::collections::HashMap;

use num_traits::Zero;

use super::GroebnerBasis;
use crate::poly::{Monomial, Polynomial, PolyError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuotientError {
    #[error("quotient algebra is infinite-dimensional (no pure power of `{0}` among leading monomials)")]
    InfiniteDimensional(String),
}

/// Sparse column: `(basis index, coefficient)` pairs.
pub type SparseVec = Vec<(usize, Rational)>;

/// Finite-dimensional quotient `Q[x]/I` with its standard-monomial basis.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    gb: GroebnerBasis,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl QuotientAlgebra {
    /// Enumerates the standard monomials of a reduced basis.
    pub fn new(gb: &GroebnerBasis) -> Result<Self, QuotientError> {
        let nvars = gb.ring().nvars();
        if gb.contains_one() {
            return Ok(QuotientAlgebra {
                gb: gb.clone(),
                basis: Vec::new(),
                index: HashMap::new(),
            });
        }
        let lms: Vec<&Monomial> = gb.leading_monomials().collect();
        let mut bounds = vec![u32::MAX; nvars];
        for lm in &lms {
            if let Some(v) = lm.pure_power_var() {
                bounds[v] = bounds[v].min(lm.exponents()[v]);
            }
        }
        if let Some(v) = bounds.iter().position(|&b| b == u32::MAX) {
            return Err(QuotientError::InfiniteDimensional(gb.ring().vars()[v].clone()));
        }

        // walk the box below the pure powers, keeping non-divisible monomials
        let mut basis = Vec::new();
        let mut exps = vec![0u32; nvars];
        loop {
            let m = Monomial::from_exponents(&exps);
            if !lms.iter().any(|lm| lm.divides(&m)) {
                basis.push(m);
            }
            let mut k = 0;
            loop {
                if k == nvars {
                    break;
                }
                exps[k] += 1;
                if exps[k] < bounds[k] {
                    break;
                }
                exps[k] = 0;
                k += 1;
            }
            if k == nvars {
                break;
            }
        }
        let order = gb.order();
        basis.sort_by(|a, b| order.cmp(a, b));
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(QuotientAlgebra {
            gb: gb.clone(),
            basis,
            index,
        })
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of the class of `p` in the standard-monomial basis.
    pub fn coords(&self, p: &Polynomial) -> Result<Vec<Rational>, PolyError> {
        let nf = self.gb.normal_form(p)?;
        let mut v = vec![Rational::zero(); self.dim()];
        for (m, c) in nf.terms() {
            let i = self
                .index_of(m)
                .expect("normal form lies in the span of standard monomials");
            v[i] = c.clone();
        }
        Ok(v)
    }

    fn sparse_coords_of_monomial(&self, m: &Monomial) -> SparseVec {
        if let Some(i) = self.index_of(m) {
            return vec![(i, Rational::from_integer(1.into()))];
        }
        let ring = self.gb.ring();
        let p = Polynomial::monomial(ring, m.clone(), Rational::from_integer(1.into()));
        let nf = self.gb.reduce_unchecked(&p);
        let mut v: SparseVec = nf
            .terms()
            .map(|(m, c)| (self.index_of(m).expect("standard monomial"), c.clone()))
            .collect();
        v.sort_by_key(|t| t.0);
        v
    }

    /// For each basis index `i > 0`, a pair `(p, v)` with `b_i = x_v * b_p`.
    /// Entry 0 (the monomial 1) is a placeholder.
    pub fn parents(&self) -> Vec<(usize, usize)> {
        let nvars = self.gb.ring().nvars();
        let mut parents = vec![(0, 0); self.dim()];
        for (i, b) in self.basis.iter().enumerate().skip(1) {
            let v = (0..nvars)
                .find(|&v| b.exponents()[v] > 0)
                .expect("non-constant standard monomial");
            let mut exps = b.exponents().to_vec();
            exps[v] -= 1;
            parents[i] = (
                self.index_of(&Monomial::from_exponents(&exps))
                    .expect("standard monomials are closed under division"),
                v,
            );
        }
        parents
    }

    /// Normal form of `a * b`.
    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial, PolyError> {
        self.gb.normal_form(&a.try_mul(b)?)
    }

    /// Matrices of multiplication by each variable, stored by columns:
    /// `table[v][j]` holds the coordinates of `x_v * b_j`.
    pub fn multiplication_table(&self) -> Vec<Vec<SparseVec>> {
        let nvars = self.gb.ring().nvars();
        (0..nvars)
            .map(|v| {
                self.basis
                    .iter()
                    .map(|b| self.sparse_coords_of_monomial(&b.mul_var(v)))
                    .collect()
            })
            .collect()
    }
}

/// Incremental test of `I + <p_1, p_2, ...> = (1)` for the ideal `I` of a
/// finite-dimensional quotient: the classes `p_i * b_j` must span `Q[x]/I`.
pub struct IdealSpan<'a> {
    q: &'a QuotientAlgebra,
    table: Vec<Vec<SparseVec>>,
    // (predecessor index, variable) for every basis element but 1
    parents: Vec<(usize, usize)>,
    // echelon rows, pivot entry 1
    rows: Vec<(usize, Vec<Rational>)>,
}

impl<'a> IdealSpan<'a> {
    pub fn new(q: &'a QuotientAlgebra) -> Self {
        IdealSpan {
            q,
            table: q.multiplication_table(),
            parents: q.parents(),
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_unit(&self) -> bool {
        self.rows.len() == self.q.dim()
    }

    fn times_var(&self, u: &[Rational], v: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); u.len()];
        for (j, uj) in u.iter().enumerate() {
            if uj.is_zero() {
                continue;
            }
            for (i, c) in &self.table[v][j] {
                out[*i] += uj * c;
            }
        }
        out
    }

    fn insert(&mut self, mut w: Vec<Rational>) {
        for (pivot, row) in &self.rows {
            let c = w[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (wi, ri) in w.iter_mut().zip(row) {
                if !ri.is_zero() {
                    *wi -= &c * ri;
                }
            }
        }
        if let Some(pivot) = w.iter().position(|c| !c.is_zero()) {
            let inv = w[pivot].recip();
            let row: Vec<Rational> = w.iter().map(|c| c * &inv).collect();
            // keep earlier rows free of the new pivot so reduction stays one pass
            for (_, other) in &mut self.rows {
                let c = other[pivot].clone();
                if !c.is_zero() {
                    for (oi, ri) in other.iter_mut().zip(&row) {
                        if !ri.is_zero() {
                            *oi -= &c * ri;
                        }
                    }
                }
            }
            self.rows.push((pivot, row));
        }
    }

    /// Adds the principal ideal of `p`; returns whether the span is now all
    /// of the quotient.
    pub fn add(&mut self, p: &Polynomial) -> Result<bool, PolyError> {
        if self.is_unit() {
            return Ok(true);
        }
        let base = self.q.coords(p)?;
        if base.iter().all(Zero::is_zero) {
            return Ok(self.is_unit());
        }
        let n = self.q.dim();
        let mut multiples: Vec<Vec<Rational>> = Vec::with_capacity(n);
        multiples.push(base);
        for i in 1..n {
            let (parent, v) = self.parents[i];
            let next = self.times_var(&multiples[parent], v);
            multiples.push(next);
        }
        for m in multiples {
            self.insert(m);
            if self.is_unit() {
                break;
            }
        }
        Ok(self.is_unit())
    }
}
