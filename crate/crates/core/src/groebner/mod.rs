//! Reduced Gröbner bases over the rationals, normal forms and the
//! standard-monomial basis of zero-dimensional quotient algebras.

mod fglm;
mod ipoly;
mod quotient;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::poly::{Monomial, MonomialOrder, Polynomial, PolyError, Rational, Ring};

pub(crate) use ipoly::IPoly;
pub use fglm::fglm;
pub use quotient::{IdealSpan, QuotientAlgebra, QuotientError, SparseVec};

/// Reduced Gröbner basis with monic generators, sorted by ascending leading
/// monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Arc<Ring>,
    order: MonomialOrder,
    generators: Vec<Polynomial>,
    // primitive integer multiples of `generators`, same order
    work: Vec<IPoly>,
}

impl GroebnerBasis {
    /// Wraps generators already known to form a reduced monic basis.
    pub(crate) fn from_reduced(ring: &Arc<Ring>, order: MonomialOrder, mut generators: Vec<Polynomial>) -> Self {
        generators.sort_by(|a, b| {
            let la = a.leading_term(order).expect("nonzero").0;
            let lb = b.leading_term(order).expect("nonzero").0;
            order.cmp(&la, &lb)
        });
        let work = generators
            .iter()
            .map(|g| {
                let (mut ip, _) = IPoly::from_polynomial(g, order);
                ip.make_primitive();
                ip
            })
            .collect();
        GroebnerBasis {
            ring: ring.clone(),
            order,
            generators,
            work,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.work.iter().map(IPoly::lm)
    }

    /// True iff the ideal is the whole ring.
    pub fn contains_one(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_one()
    }

    /// Remainder of `p` on division by the basis. Linear and idempotent; zero
    /// exactly for members of the ideal.
    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial, PolyError> {
        if p.ring() != &self.ring {
            return Err(PolyError::RingMismatch);
        }
        Ok(self.reduce_unchecked(p))
    }

    pub(crate) fn reduce_unchecked(&self, p: &Polynomial) -> Polynomial {
        if p.is_zero() {
            return p.clone();
        }
        let (ip, s) = IPoly::from_polynomial(p, self.order);
        let refs: Vec<&IPoly> = self.work.iter().collect();
        let red = ipoly::reduce(ip, &refs, self.order, false);
        let scale = red.scale * Rational::from_integer(s);
        red.remainder.to_polynomial(&self.ring, &scale)
    }

    /// True iff `p` lies in the ideal.
    pub fn contains(&self, p: &Polynomial) -> Result<bool, PolyError> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Basis of the ideal generated by this basis together with `extra`.
    /// The extra generators are reduced first, so this is cheap when they
    /// are few or already small modulo the ideal.
    pub fn extend(&self, extra: &[Polynomial]) -> Result<GroebnerBasis, PolyError> {
        let mut gens = self.generators.clone();
        for p in extra {
            let nf = self.normal_form(p)?;
            if !nf.is_zero() {
                gens.push(nf);
            }
        }
        Ok(buchberger_with_ring(&self.ring, &gens, self.order))
    }

    /// Multi-line dump in the canonical polynomial grammar.
    pub fn dump(&self) -> String {
        self.generators
            .iter()
            .map(|g| g.format_with_order(self.order))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Computes the reduced Gröbner basis of the ideal generated by `generators`.
///
/// # Panics
/// If the generators do not share one ring, or the list is empty.
pub fn buchberger(generators: &[Polynomial], order: MonomialOrder) -> GroebnerBasis {
    let ring = generators
        .first()
        .expect("at least one generator")
        .ring()
        .clone();
    for g in generators {
        assert_eq!(g.ring(), &ring, "generators over different rings");
    }
    if order == MonomialOrder::Lex {
        // lex bases of zero-dimensional ideals go through FGLM
        let grevlex = buchberger_with_ring(&ring, generators, MonomialOrder::DegRevLex);
        if let Ok(q) = QuotientAlgebra::new(&grevlex) {
            return fglm(&q, MonomialOrder::Lex);
        }
    }
    buchberger_with_ring(&ring, generators, order)
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn pair_key_less(a: &Pair, b: &Pair, order: MonomialOrder) -> bool {
    use std::cmp::Ordering::*;
    match a.lcm.degree().cmp(&b.lcm.degree()) {
        Less => return true,
        Greater => return false,
        Equal => {}
    }
    match order.cmp(&a.lcm, &b.lcm) {
        Less => true,
        Greater => false,
        Equal => (a.j, a.i) < (b.j, b.i),
    }
}

struct Engine {
    order: MonomialOrder,
    polys: Vec<IPoly>,
    // indices of the current basis (Gebauer-Möller G)
    basis: Vec<usize>,
    pairs: Vec<Pair>,
}

impl Engine {
    fn basis_refs(&self) -> Vec<&IPoly> {
        self.basis.iter().map(|&i| &self.polys[i]).collect()
    }

    /// Gebauer–Möller installation of a new basis element.
    fn update(&mut self, h_poly: IPoly) {
        let h = self.polys.len();
        self.polys.push(h_poly);
        let lm_h = self.polys[h].lm().clone();

        let c: Vec<(usize, Monomial)> = self
            .basis
            .iter()
            .map(|&g| (g, self.polys[g].lm().lcm(&lm_h)))
            .collect();

        // chain criterion among the new pairs
        let mut d: Vec<(usize, Monomial)> = Vec::new();
        for (idx, (g1, l1)) in c.iter().enumerate() {
            let coprime = self.polys[*g1].lm().is_coprime(&lm_h);
            let dominated = c[idx + 1..].iter().any(|(_, l2)| l2.divides(l1))
                || d.iter().any(|(_, l2)| l2.divides(l1));
            if coprime || !dominated {
                d.push((*g1, l1.clone()));
            }
        }
        // product criterion
        let e: Vec<Pair> = d
            .into_iter()
            .filter(|(g, _)| !self.polys[*g].lm().is_coprime(&lm_h))
            .map(|(g, lcm)| Pair { i: g, j: h, lcm })
            .collect();

        // drop old pairs made redundant by h
        let polys = &self.polys;
        self.pairs.retain(|p| {
            !lm_h.divides(&p.lcm)
                || polys[p.i].lm().lcm(&lm_h) == p.lcm
                || polys[p.j].lm().lcm(&lm_h) == p.lcm
        });
        self.pairs.extend(e);

        self.basis.retain(|&g| !lm_h.divides(polys[g].lm()));
        self.basis.push(h);
    }

    fn take_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..self.pairs.len() {
            if pair_key_less(&self.pairs[k], &self.pairs[best], self.order) {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }
}

/// Buchberger's algorithm run under `order` itself, without the FGLM route
/// that [`buchberger`] takes for lex. Same output, usually slower; useful as
/// an independent cross-check.
pub fn buchberger_direct(generators: &[Polynomial], order: MonomialOrder) -> GroebnerBasis {
    let ring = generators.first().expect("at least one generator").ring().clone();
    for g in generators {
        assert_eq!(g.ring(), &ring, "generators over different rings");
    }
    buchberger_with_ring(&ring, generators, order)
}

pub(crate) fn buchberger_with_ring(
    ring: &Arc<Ring>,
    generators: &[Polynomial],
    order: MonomialOrder,
) -> GroebnerBasis {
    let mut inputs: Vec<IPoly> = generators
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let (mut ip, _) = IPoly::from_polynomial(g, order);
            ip.make_primitive();
            ip
        })
        .collect();
    inputs.sort_by(|a, b| order.cmp(a.lm(), b.lm()));

    let mut engine = Engine {
        order,
        polys: Vec::new(),
        basis: Vec::new(),
        pairs: Vec::new(),
    };

    let unit = |ring: &Arc<Ring>| GroebnerBasis {
        ring: ring.clone(),
        order,
        generators: vec![Polynomial::one(ring)],
        work: vec![IPoly {
            terms: vec![(Monomial::one(ring.nvars()), BigInt::one())],
        }],
    };

    for f in inputs {
        let red = ipoly::reduce(f, &engine.basis_refs(), order, false);
        let mut r = red.remainder;
        if r.is_zero() {
            continue;
        }
        r.make_primitive();
        if r.lm().is_one() {
            return unit(ring);
        }
        engine.update(r);
    }

    while let Some(pair) = engine.take_pair() {
        let s = ipoly::s_polynomial(&engine.polys[pair.i], &engine.polys[pair.j], order);
        if s.is_zero() {
            continue;
        }
        let red = ipoly::reduce(s, &engine.basis_refs(), order, false);
        let mut r = red.remainder;
        if r.is_zero() {
            continue;
        }
        r.make_primitive();
        if r.lm().is_one() {
            return unit(ring);
        }
        engine.update(r);
    }

    // the Gebauer–Möller basis is already minimal; interreduce the tails
    let mut minimal: Vec<IPoly> = engine
        .basis
        .iter()
        .map(|&i| engine.polys[i].clone())
        .collect();
    minimal.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    let mut reduced: Vec<IPoly> = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&IPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, p)| p)
            .collect();
        let mut g = minimal[k].clone();
        let lead = g.terms.pop().expect("nonzero");
        // reduce the tail only; the leading term is irreducible by minimality
        let tail = IPoly { terms: g.terms };
        let red = ipoly::reduce(tail, &others, order, false);
        // lead*scale + tail_remainder, keep primitive
        let mut tail_terms = red.remainder.terms;
        let scale = red.scale;
        // lead coefficient times scale must be integral after clearing
        let numer = scale.numer().clone();
        let denom = scale.denom().clone();
        for (_, c) in &mut tail_terms {
            *c *= &denom;
        }
        let lead_c = lead.1 * numer;
        tail_terms.push((lead.0, lead_c));
        let mut p = IPoly { terms: tail_terms };
        p.make_primitive();
        reduced.push(p);
    }

    let generators = reduced
        .iter()
        .map(|p| {
            let lc = Rational::from_integer(p.lc().clone());
            p.to_polynomial(ring, &lc)
        })
        .collect();
    GroebnerBasis {
        ring: ring.clone(),
        order,
        generators,
        work: reduced,
    }
}
