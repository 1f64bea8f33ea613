//! Integer-coefficient working polynomials for the Gröbner engine.
//!
//! Terms are stored in ascending order under the active monomial order, so
//! the leading term is the last element. Elements kept in a basis are
//! primitive with a positive leading coefficient.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{Monomial, MonomialOrder, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IPoly {
    pub terms: Vec<(Monomial, BigInt)>,
}

impl IPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms.last().expect("nonzero polynomial").0
    }

    pub fn lc(&self) -> &BigInt {
        &self.terms.last().expect("nonzero polynomial").1
    }

    /// Clears denominators. Returns the integer polynomial and the positive
    /// factor `s` with `ipoly = s * p`.
    pub fn from_polynomial(p: &Polynomial, order: MonomialOrder) -> (IPoly, BigInt) {
        let mut den = BigInt::one();
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
        let mut terms: Vec<(Monomial, BigInt)> = p
            .terms()
            .map(|(m, c)| (m.clone(), c.numer() * (&den / c.denom())))
            .collect();
        terms.sort_by(|a, b| order.cmp(&a.0, &b.0));
        (IPoly { terms }, den)
    }

    pub fn to_polynomial(&self, ring: &std::sync::Arc<crate::poly::Ring>, scale: &Rational) -> Polynomial {
        Polynomial::from_terms(
            ring,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), Rational::from_integer(c.clone()) / scale)),
        )
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides by the content and makes the leading coefficient positive.
    /// Returns the signed factor that was divided out.
    pub fn make_primitive(&mut self) -> BigInt {
        if self.is_zero() {
            return BigInt::one();
        }
        let mut g = self.content();
        if self.lc().sign() == Sign::Minus {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in &mut self.terms {
                *c = &*c / &g;
            }
        }
        g
    }
}

/// `a*p - b*m*q` with the leading terms of `p` and `q` dropped; both inputs
/// ascending, result ascending.
pub(crate) fn combine_tails(
    p: &[(Monomial, BigInt)],
    a: &BigInt,
    q: &[(Monomial, BigInt)],
    m: &Monomial,
    b: &BigInt,
    order: MonomialOrder,
) -> Vec<(Monomial, BigInt)> {
    let p = &p[..p.len().saturating_sub(1)];
    let q = &q[..q.len().saturating_sub(1)];
    let mut out = Vec::with_capacity(p.len() + q.len());
    let a_one = a.is_one();
    let mut i = 0;
    let mut j = 0;
    let mut qm: Option<Monomial> = q.first().map(|t| t.0.mul(m));
    while i < p.len() || j < q.len() {
        let ord = match (i < p.len(), &qm) {
            (true, Some(qm)) => order.cmp(&p[i].0, qm),
            (true, None) => Ordering::Less,
            (false, _) => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                let c = if a_one { p[i].1.clone() } else { &p[i].1 * a };
                out.push((p[i].0.clone(), c));
                i += 1;
            }
            Ordering::Greater => {
                let c = -(&q[j].1 * b);
                out.push((qm.take().expect("pending term"), c));
                j += 1;
                qm = q.get(j).map(|t| t.0.mul(m));
            }
            Ordering::Equal => {
                let c = if a_one { p[i].1.clone() } else { &p[i].1 * a } - &q[j].1 * b;
                let mono = qm.take().expect("pending term");
                if !c.is_zero() {
                    out.push((mono, c));
                }
                i += 1;
                j += 1;
                qm = q.get(j).map(|t| t.0.mul(m));
            }
        }
    }
    out
}

/// Result of a fraction-free reduction: `remainder == scale * p  (mod I)`.
pub(crate) struct Reduced {
    pub remainder: IPoly,
    pub scale: Rational,
}

/// Fully reduces `p` by `basis` (every term of the result is irreducible).
/// With `top_only`, stops at the first irreducible leading term.
pub(crate) fn reduce(
    p: IPoly,
    basis: &[&IPoly],
    order: MonomialOrder,
    top_only: bool,
) -> Reduced {
    let mut cur = p.terms;
    // irreducible terms, collected in descending order
    let mut rem: Vec<(Monomial, BigInt)> = Vec::new();
    let mut scale = Rational::one();
    let mut steps = 0usize;
    while let Some((t, c)) = cur.last() {
        let divisor = basis.iter().find(|g| g.lm().divides(t));
        match divisor {
            None => {
                if top_only {
                    break;
                }
                let term = cur.pop().expect("nonempty");
                rem.push(term);
            }
            Some(g) => {
                let m = g.lm().quotient_of(t).expect("divides");
                let lc = g.lc();
                let d = c.gcd(lc);
                let a = lc / &d;
                let b = c / &d;
                cur = combine_tails(&cur, &a, &g.terms, &m, &b, order);
                if !a.is_one() {
                    for (_, x) in &mut rem {
                        *x *= &a;
                    }
                    scale *= Rational::from_integer(a);
                }
                steps += 1;
                if steps % 16 == 0 {
                    shrink(&mut cur, &mut rem, &mut scale);
                }
            }
        }
    }
    rem.reverse();
    // remaining unreduced tail (top_only) sits below the remainder terms
    let mut terms = cur;
    terms.extend(rem);
    let mut out = IPoly { terms };
    if !out.is_zero() {
        let g = out.content();
        if !g.is_one() {
            for (_, c) in &mut out.terms {
                *c = &*c / &g;
            }
            scale /= Rational::from_integer(g);
        }
    }
    Reduced {
        remainder: out,
        scale,
    }
}

fn shrink(cur: &mut [(Monomial, BigInt)], rem: &mut [(Monomial, BigInt)], scale: &mut Rational) {
    let mut g = BigInt::zero();
    for (_, c) in cur.iter().chain(rem.iter()) {
        g = g.gcd(c);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, c) in cur.iter_mut().chain(rem.iter_mut()) {
        *c = &*c / &g;
    }
    *scale /= Rational::from_integer(g);
}

/// S-polynomial of two primitive basis elements.
pub(crate) fn s_polynomial(f: &IPoly, g: &IPoly, order: MonomialOrder) -> IPoly {
    let lcm = f.lm().lcm(g.lm());
    let mf = f.lm().quotient_of(&lcm).expect("lcm");
    let mg = g.lm().quotient_of(&lcm).expect("lcm");
    let d = f.lc().gcd(g.lc());
    let a = g.lc() / &d; // multiplies f
    let b = f.lc() / &d; // multiplies g
    // a*mf*f - b*mg*g; shift f by mf first
    let fs: Vec<(Monomial, BigInt)> = f.terms.iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    let terms = combine_tails(&fs, &a, &g.terms, &mg, &b, order);
    let mut s = IPoly { terms };
    if s.lc_sign_negative() {
        for (_, c) in &mut s.terms {
            *c = -&*c;
        }
    }
    s
}

impl IPoly {
    fn lc_sign_negative(&self) -> bool {
        self.terms.last().is_some_and(|t| t.1.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, Ring};

    #[test]
    fn reduction_tracks_scale() {
        let ring = Ring::new(&["x", "y"]);
        let order = MonomialOrder::DegRevLex;
        let g = parse_polynomial("2*x^2 - y", &ring).unwrap();
        let p = parse_polynomial("x^3 + 1/3*x*y + y^2", &ring).unwrap();
        let (gi, _) = IPoly::from_polynomial(&g, order);
        let (pi, ps) = IPoly::from_polynomial(&p, order);
        let red = reduce(pi, &[&gi], order, false);
        // remainder/scale/ps must equal p mod g: x^3 = x*y/2 mod g
        let r = red.remainder.to_polynomial(&ring, &(red.scale * Rational::from_integer(ps)));
        let expected = parse_polynomial("5/6*x*y + y^2", &ring).unwrap();
        assert_eq!(r, expected);
    }
}
