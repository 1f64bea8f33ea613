use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::{Monomial, MonomialOrder};
use super::{PolyError, Rational};

/// Ordered list of variable names. Polynomials over the same ring share one
/// `Arc<Ring>`; equality is by the variable list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
}

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Arc<Ring> {
        Arc::new(Ring {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

/// Multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a map from exponent vector to a nonzero coefficient;
/// the zero polynomial has no terms.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.nvars()), c);
        }
        p
    }

    pub fn from_int(ring: &Arc<Ring>, c: i64) -> Self {
        Self::constant(ring, Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(ring: &Arc<Ring>, index: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), index), Rational::one())
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: Rational) -> Self {
        debug_assert_eq!(m.nvars(), ring.nvars());
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and
    /// dropping zeros.
    pub fn from_terms<I>(ring: &Arc<Ring>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial length does not match ring");
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// Constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Terms sorted in descending order under `order`.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = Polynomial::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative with respect to variable `index`.
    pub fn derivative(&self, index: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exponents()[index];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[index] -= 1;
            out.add_term(
                Monomial::from_exponents(&exps),
                c * Rational::from_integer(BigInt::from(e)),
            );
        }
        out
    }

    pub fn derivative_by_name(&self, name: &str) -> Result<Polynomial, PolyError> {
        let idx = self
            .ring
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(self.derivative(idx))
    }

    /// Exact evaluation by nested Horner schemes, one variable at a time.
    pub fn eval_rational(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        self.check_point(point.len())?;
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        // derived Ord is lex on exponents; descending lex groups by leading variables
        terms.reverse();
        Ok(horner(&terms, 0, point, Rational::zero))
    }

    pub fn eval_f64(&self, point: &[f64]) -> Result<f64, PolyError> {
        self.check_point(point.len())?;
        let mut terms: Vec<(&Monomial, f64)> = self
            .terms
            .iter()
            .map(|(m, c)| (m, rational_to_f64(c)))
            .collect();
        terms.reverse();
        Ok(horner_f64(&terms, 0, point))
    }

    fn check_point(&self, len: usize) -> Result<(), PolyError> {
        if len != self.ring.nvars() {
            return Err(PolyError::DimensionMismatch {
                expected: self.ring.nvars(),
                got: len,
            });
        }
        Ok(())
    }

    /// Re-expresses the polynomial in `target`, sending variable `i` to
    /// variable `positions[i]` of the target ring.
    pub fn embed(&self, target: &Arc<Ring>, positions: &[usize]) -> Polynomial {
        assert_eq!(positions.len(), self.ring.nvars());
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            out.add_term(m.embed(target.nvars(), positions), c.clone());
        }
        out
    }

    /// Substitutes `x_index -> -x_index`.
    pub fn negate_var(&self, index: usize) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let c = if m.exponents()[index] % 2 == 1 { -c.clone() } else { c.clone() };
                    (m.clone(), c)
                })
                .collect(),
        }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        let order = MonomialOrder::DegRevLex;
        let (dm, dc) = d.leading_term(order)?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rest = self.clone();
        let mut quot = Polynomial::zero(&self.ring);
        while let Some((m, c)) = rest.leading_term(order) {
            let qm = dm.quotient_of(m)?;
            let qc = c / &dc;
            let step = Polynomial::monomial(&self.ring, qm, qc);
            rest = &rest - &(&step * d);
            quot += &step;
        }
        Some(quot)
    }

    /// Canonical text in descending degrevlex order with explicit `*` and `^`.
    pub fn to_canonical_string(&self) -> String {
        self.format_with_order(MonomialOrder::DegRevLex)
    }

    pub fn format_with_order(&self, order: MonomialOrder) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.sorted_terms(order).into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let mono = format_monomial(m, self.ring.vars());
            match (abs.is_one(), mono.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&mono),
                (false, true) => out.push_str(&format_rational(&abs)),
                (false, false) => {
                    out.push_str(&format_rational(&abs));
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }
}

fn horner(
    terms: &[(&Monomial, &Rational)],
    var: usize,
    point: &[Rational],
    zero: fn() -> Rational,
) -> Rational {
    if terms.is_empty() {
        return zero();
    }
    if var == point.len() {
        // all remaining exponents agree, so there is exactly one term left
        return terms.iter().fold(zero(), |acc, (_, c)| acc + *c);
    }
    // terms are in descending lex order: group by exponent of `var`
    let mut acc = zero();
    let mut prev_exp: Option<u32> = None;
    let mut start = 0;
    while start < terms.len() {
        let e = terms[start].0.exponents()[var];
        let mut end = start;
        while end < terms.len() && terms[end].0.exponents()[var] == e {
            end += 1;
        }
        let inner = horner(&terms[start..end], var + 1, point, zero);
        if let Some(pe) = prev_exp {
            for _ in 0..(pe - e) {
                acc *= &point[var];
            }
        }
        acc += inner;
        prev_exp = Some(e);
        start = end;
    }
    if let Some(pe) = prev_exp {
        for _ in 0..pe {
            acc *= &point[var];
        }
    }
    acc
}

fn horner_f64(terms: &[(&Monomial, f64)], var: usize, point: &[f64]) -> f64 {
    if terms.is_empty() {
        return 0.0;
    }
    if var == point.len() {
        return terms.iter().map(|t| t.1).sum();
    }
    let mut acc = 0.0;
    let mut prev_exp: Option<u32> = None;
    let mut start = 0;
    while start < terms.len() {
        let e = terms[start].0.exponents()[var];
        let mut end = start;
        while end < terms.len() && terms[end].0.exponents()[var] == e {
            end += 1;
        }
        let inner = horner_f64(&terms[start..end], var + 1, point);
        if let Some(pe) = prev_exp {
            acc *= point[var].powi((pe - e) as i32);
        }
        acc += inner;
        prev_exp = Some(e);
        start = end;
    }
    if let Some(pe) = prev_exp {
        acc *= point[var].powi(pe as i32);
    }
    acc
}

pub(crate) fn rational_to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // huge numerator or denominator: fall back to scaled division
        let n = c.numer().to_f64().unwrap_or(f64::NAN);
        let d = c.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn format_monomial(m: &Monomial, vars: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars[i].clone()),
            _ => parts.push(format!("{}^{}", vars[i], e)),
        }
    }
    parts.join("*")
}

fn format_rational(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.to_canonical_string())
    }
}

// Operator impls panic on ring mismatch; use the `try_*` methods where the
// rings come from user input.
impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("ring mismatch")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("ring mismatch")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("ring mismatch")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl std::ops::AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        assert!(self.check_ring(rhs).is_ok(), "ring mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

/// Compares two polynomials by their leading monomials under `order`
/// (zero is smallest).
pub fn cmp_leading(a: &Polynomial, b: &Polynomial, order: MonomialOrder) -> Ordering {
    match (a.leading_term(order), b.leading_term(order)) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some((ma, _)), Some((mb, _))) => order.cmp(ma, mb),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn ring3() -> Arc<Ring> {
        Ring::new(&["x", "y", "z"])
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn additive_inverse_and_difference_of_squares() {
        let ring = Ring::new(&["x", "y"]);
        let x = Polynomial::var(&ring, 0);
        let y = Polynomial::var(&ring, 1);
        assert!((&x + &(-&x)).is_zero());
        let prod = &(&x + &y) * &(&x - &y);
        assert_eq!(prod, parse_polynomial("x^2 - y^2", &ring).unwrap());
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let a = Polynomial::var(&Ring::new(&["x"]), 0);
        let b = Polynomial::var(&Ring::new(&["y"]), 0);
        assert_eq!(a.try_add(&b), Err(PolyError::RingMismatch));
        assert_eq!(a.try_mul(&b), Err(PolyError::RingMismatch));
    }

    #[test]
    fn power_rule() {
        let ring = ring3();
        let h = parse_polynomial("x^2+y^2+z^2-1", &ring).unwrap();
        assert_eq!(h.derivative(0), parse_polynomial("2*x", &ring).unwrap());
        let p = parse_polynomial("3*z^3+10*z^2+9*z", &ring).unwrap();
        assert_eq!(
            p.derivative_by_name("z").unwrap(),
            parse_polynomial("9*z^2+20*z+9", &ring).unwrap()
        );
        assert_eq!(
            p.derivative_by_name("w"),
            Err(PolyError::UnknownVariable("w".into()))
        );
    }

    #[test]
    fn evaluation() {
        let ring = ring3();
        let h = parse_polynomial("x^2+y^2+z^2-1", &ring).unwrap();
        let pt = [r(1, 1), r(0, 1), r(0, 1)];
        assert!(h.eval_rational(&pt).unwrap().is_zero());
        assert!(Polynomial::zero(&ring).eval_rational(&pt).unwrap().is_zero());
        assert_eq!(h.eval_f64(&[0.5, 0.5, 0.5]).unwrap(), -0.25);
        assert!(matches!(
            h.eval_rational(&pt[..2]),
            Err(PolyError::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn canonical_printing() {
        let ring = ring3();
        let p = parse_polynomial("1 - 2*z + x*y^2 - 0.5*x", &ring).unwrap();
        assert_eq!(p.to_canonical_string(), "x*y^2 - 1/2*x - 2*z + 1");
        assert_eq!(Polynomial::zero(&ring).to_string(), "0");
        assert_eq!((-&Polynomial::one(&ring)).to_string(), "-1");
    }

    #[test]
    fn negating_a_variable() {
        let ring = ring3();
        let p = parse_polynomial("x^3*y + x^2 + x*z", &ring).unwrap();
        assert_eq!(
            p.negate_var(0),
            parse_polynomial("-x^3*y + x^2 - x*z", &ring).unwrap()
        );
    }
}
