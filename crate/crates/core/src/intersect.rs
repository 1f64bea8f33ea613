//! Mod-2 intersection number of a polynomial matrix map with the set of
//! positive-corank matrices, via the quadratic forms
//! `Φ(f1, f2) = φ(f1 f2)` and `Ψ(f1, f2) = φ(g f1 f2)` on `A = Q[x]/J`:
//!
//! ```text
//! I2(a, Σ) = dim A + 1 + (sgn det[Φ] + sgn det[Ψ]) / 2   (mod 2)
//! ```

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::groebner::{buchberger, GroebnerBasis, QuotientAlgebra, SparseVec};
use crate::matmap::{build_j, build_j_prime, MatrixError, PolyMatrix};
use crate::poly::{MonomialOrder, Polynomial, PolyError, Rational};

/// Functional values are drawn from `[-FUNCTIONAL_BOUND, FUNCTIONAL_BOUND]`.
pub const FUNCTIONAL_BOUND: i64 = 997;
pub const DEFAULT_MAX_RETRIES: usize = 64;

pub type RatMatrix = Vec<Vec<Rational>>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntersectError {
    #[error("hypotheses of the determinant formula fail: {0}")]
    HypothesisFailed(AssumptionReport),
    #[error("{0} consecutive functionals gave a singular [Psi]")]
    FunctionalExhausted(usize),
    #[error("the quotient algebra is zero; no functional exists")]
    ZeroDimAlgebra,
    #[error("det[Psi] != 0 but det[Phi] = 0 (functional seed {0})")]
    SingularPhi(u64),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Linear functional on `A`, given by its values on the standard monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    pub values: Vec<Rational>,
    pub seed: u64,
}

/// Outcome of the three exact hypothesis checks.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct AssumptionReport {
    pub dim_finite: bool,
    /// `None` when the algebra is infinite-dimensional.
    pub dim: Option<usize>,
    pub j_plus_jprime_trivial: bool,
    pub j_plus_g_trivial: bool,
}

impl AssumptionReport {
    pub fn all_hold(&self) -> bool {
        self.dim_finite && self.j_plus_jprime_trivial && self.j_plus_g_trivial
    }
}

impl std::fmt::Display for AssumptionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let dim = match self.dim {
            Some(d) => d.to_string(),
            None => "infinite".into(),
        };
        write!(
            f,
            "dim A = {dim}, J+J' = (1): {}, J+<g> = (1): {}",
            self.j_plus_jprime_trivial, self.j_plus_g_trivial
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct IntersectionResult {
    pub parity: u8,
    pub dim: usize,
    pub sign_phi: i8,
    pub sign_psi: i8,
    pub functional_seed: u64,
    pub retries: usize,
}

/// Everything derived from `(h, g, a)` that does not depend on the functional.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub report: AssumptionReport,
    pub gb_j: GroebnerBasis,
    pub quotient: Option<QuotientAlgebra>,
    pub g: Polynomial,
}

/// Decides the three hypotheses exactly with reduced Gröbner bases.
pub fn check_assumptions(
    h: &[Polynomial],
    g: &Polynomial,
    a: &PolyMatrix,
    order: MonomialOrder,
) -> Result<Prepared, IntersectError> {
    if g.ring() != a.ring() {
        return Err(IntersectError::Poly(PolyError::RingMismatch));
    }
    let j = build_j(h, a)?;
    let j_prime = build_j_prime(h, a)?;
    let gb_j = buchberger(&j, order);
    let quotient = QuotientAlgebra::new(&gb_j).ok();
    // every k-minor lies in the ideal of (k-1)-minors, so J + J' = J'
    let j_plus_jprime = buchberger(&j_prime, order).contains_one();
    let mut with_g = vec![g.clone()];
    with_g.extend(j.iter().cloned());
    let j_plus_g = buchberger(&with_g, order).contains_one();
    let report = AssumptionReport {
        dim_finite: quotient.is_some(),
        dim: quotient.as_ref().map(QuotientAlgebra::dim),
        j_plus_jprime_trivial: j_plus_jprime,
        j_plus_g_trivial: j_plus_g,
    };
    Ok(Prepared {
        report,
        gb_j,
        quotient,
        g: g.clone(),
    })
}

/// Seed used for retry `attempt` of base seed `seed`.
pub fn derive_seed(seed: u64, attempt: usize) -> u64 {
    if attempt == 0 {
        return seed;
    }
    // splitmix64 finalizer over (seed, attempt)
    let mut z = seed ^ (attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn random_functional(q: &QuotientAlgebra, seed: u64) -> Result<Functional, IntersectError> {
    if q.dim() == 0 {
        return Err(IntersectError::ZeroDimAlgebra);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..q.dim())
        .map(|_| Rational::from_integer(rng.gen_range(-FUNCTIONAL_BOUND..=FUNCTIONAL_BOUND).into()))
        .collect();
    Ok(Functional { values, seed })
}

/// Multiplication by one variable: `out[j] = Σ row[i] · cols[j][i] / den`.
#[derive(Clone, Debug)]
struct IntMul {
    cols: Vec<Vec<(usize, BigInt)>>,
    den: BigInt,
}

impl IntMul {
    fn new(cols: &[SparseVec]) -> Self {
        let den = cols
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let cols = cols
            .iter()
            .map(|col| col.iter().map(|(i, c)| (*i, c.numer() * (&den / c.denom()))).collect())
            .collect();
        IntMul { cols, den }
    }
}

/// Row vector `num / den`; `den > 0` and the common content is divided out.
#[derive(Clone, Debug)]
struct IntRow {
    num: Vec<BigInt>,
    den: BigInt,
}

impl IntRow {
    fn zero(n: usize) -> Self {
        IntRow {
            num: vec![BigInt::zero(); n],
            den: BigInt::one(),
        }
    }

    fn from_rationals(values: &[Rational]) -> Self {
        let den = values.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = values.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        IntRow { num, den }.normalized()
    }

    fn normalized(mut self) -> Self {
        let g = self.num.iter().fold(self.den.clone(), |acc, c| acc.gcd(c));
        if !g.is_one() && !g.is_zero() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
        self
    }

    /// `self += c · r`.
    fn add_scaled(&mut self, c: &Rational, r: &IntRow) {
        let rden = &r.den * c.denom();
        let den = self.den.lcm(&rden);
        let (ls, rs) = (&den / &self.den, &den / &rden);
        let rs = rs * c.numer();
        for (a, b) in self.num.iter_mut().zip(&r.num) {
            *a = &*a * &ls + b * &rs;
        }
        self.den = den;
    }

    fn to_rationals(&self) -> Vec<Rational> {
        self.num.iter().map(|c| Rational::new(c.clone(), self.den.clone())).collect()
    }
}

/// Builds `[Φ]`-type matrices through the multiplication table of `A`.
///
/// With `ρ_b = φ ∘ (multiplication by w·b)` as a row vector, row `i` of the
/// weighted form is `ρ_{b_i}`, and `ρ_{x_v b} = ρ_b M_v`. Rows are carried
/// as integer vectors over one denominator, which keeps the inner loop free
/// of gcds.
#[derive(Clone, Debug)]
pub struct FormBuilder {
    q: QuotientAlgebra,
    table: Vec<IntMul>,
    // for each basis index > 0: (predecessor index, variable)
    parents: Vec<(usize, usize)>,
}

impl FormBuilder {
    pub fn new(q: &QuotientAlgebra) -> Self {
        let table = q.multiplication_table().iter().map(|m| IntMul::new(m)).collect();
        let parents = q.parents();
        FormBuilder { q: q.clone(), table, parents }
    }

    pub fn quotient(&self) -> &QuotientAlgebra {
        &self.q
    }

    fn row_times(&self, row: &IntRow, var: usize) -> IntRow {
        let m = &self.table[var];
        let num = m
            .cols
            .iter()
            .map(|col| {
                let mut acc = BigInt::zero();
                for (i, c) in col {
                    if !row.num[*i].is_zero() {
                        acc += &row.num[*i] * c;
                    }
                }
                acc
            })
            .collect();
        IntRow {
            num,
            den: &row.den * &m.den,
        }
        .normalized()
    }

    /// `φ ∘ (multiplication by w)` as a row vector.
    fn weighted_row(&self, phi: &[Rational], weight: &Polynomial) -> Result<IntRow, PolyError> {
        let nf = self.q.gb().normal_form(weight)?;
        let base = IntRow::from_rationals(phi);
        let mut out = IntRow::zero(self.q.dim());
        for (m, c) in nf.terms() {
            let mut row = base.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    row = self.row_times(&row, v);
                }
            }
            out.add_scaled(c, &row);
        }
        Ok(out.normalized())
    }

    fn rows(&self, phi: &Functional, weight: &Polynomial) -> Result<Vec<IntRow>, PolyError> {
        let n = self.q.dim();
        let mut rows = Vec::with_capacity(n);
        if n == 0 {
            return Ok(rows);
        }
        rows.push(self.weighted_row(&phi.values, weight)?);
        for i in 1..n {
            let (p, v) = self.parents[i];
            let next = self.row_times(&rows[p], v);
            rows.push(next);
        }
        Ok(rows)
    }

    /// Matrix with entries `φ(w · b_i · b_j)`.
    pub fn matrix(&self, phi: &Functional, weight: &Polynomial) -> Result<RatMatrix, PolyError> {
        Ok(self.rows(phi, weight)?.iter().map(IntRow::to_rationals).collect())
    }

    /// `det_sign(&self.matrix(phi, weight))`, without leaving the integers.
    pub fn det_sign(&self, phi: &Functional, weight: &Polynomial) -> Result<i8, PolyError> {
        // row denominators are positive
        let a: Vec<Vec<BigInt>> = self.rows(phi, weight)?.into_iter().map(|r| r.num).collect();
        Ok(integer_det_sign(a))
    }
}

/// `[entries φ(weight · b_i · b_j)]` over the standard-monomial basis.
pub fn bilinear_matrix(
    q: &QuotientAlgebra,
    phi: &Functional,
    weight: &Polynomial,
) -> Result<RatMatrix, PolyError> {
    FormBuilder::new(q).matrix(phi, weight)
}

/// Exact determinant sign. Rows are cleared of denominators (a positive
/// scaling) and the integer matrix is reduced by Bareiss elimination.
/// The empty matrix has determinant 1.
pub fn det_sign(m: &RatMatrix) -> i8 {
    // positive row scalings leave the sign alone
    integer_det_sign(m.iter().map(|row| IntRow::from_rationals(row).num).collect())
}

fn integer_det_sign(mut a: Vec<Vec<BigInt>>) -> i8 {
    if a.is_empty() {
        return 1;
    }
    if a.len() <= SMALL_DET {
        return sign_of(&bareiss_integer_det(&mut a));
    }
    sign_of(&multimodular_det(&a))
}

/// Below this size fraction-free elimination beats residue arithmetic.
const SMALL_DET: usize = 12;

/// Exact determinant of an integer matrix from its residues modulo enough
/// primes that their product exceeds twice the Hadamard bound.
pub fn multimodular_det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    // log2 |det| <= sum_i log2 |row_i|
    let mut bound_bits: u64 = 1;
    for row in a {
        let norm2: BigInt = row.iter().map(|c| c * c).sum();
        if norm2.is_zero() {
            return BigInt::zero();
        }
        bound_bits += norm2.bits().div_ceil(2);
    }
    let digits: Vec<Vec<(bool, Vec<u32>)>> = a
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| {
                    let (s, d) = c.to_u32_digits();
                    (s == Sign::Minus, d)
                })
                .collect()
        })
        .collect();

    let mut primes = Primes31::new();
    let mut modulus = BigInt::one();
    let mut value = BigInt::zero();
    let mut covered: u64 = 0;
    let mut work = vec![vec![0u64; n]; n];
    while covered <= bound_bits {
        let p = primes.next_prime();
        let field = Barrett::new(p);
        for (wrow, drow) in work.iter_mut().zip(&digits) {
            for (w, (neg, d)) in wrow.iter_mut().zip(drow) {
                let r = d.iter().rev().fold(0u64, |acc, &x| field.reduce((acc << 32) | x as u64));
                *w = if *neg && r != 0 { p - r } else { r };
            }
        }
        let r = det_mod_p(&mut work, &field);
        // Garner step: value ≡ r (mod p), value unchanged mod `modulus`
        let v_mod_p = (&value % p).to_u64().expect("residue fits");
        let m_mod_p = (&modulus % p).to_u64().expect("residue fits");
        let diff = (r + p - v_mod_p) % p;
        let t = diff * pow_mod(m_mod_p, p - 2, p) % p;
        value += &modulus * t;
        modulus *= p;
        covered += 30;
    }
    let half = &modulus >> 1u32;
    if value > half {
        value - modulus
    } else {
        value
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Reduction modulo a fixed `p < 2^31` without hardware division.
struct Barrett {
    p: u64,
    // floor(2^64 / p)
    m: u64,
}

impl Barrett {
    fn new(p: u64) -> Self {
        Barrett {
            p,
            m: (u128::from(u64::MAX) + 1).div_euclid(u128::from(p)) as u64,
        }
    }

    /// `x mod p` for `x < 2^63`.
    #[inline]
    fn reduce(&self, x: u64) -> u64 {
        let q = ((u128::from(x) * u128::from(self.m)) >> 64) as u64;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }
}

/// Determinant modulo a prime below 2^31, destroying the input.
fn det_mod_p(a: &mut [Vec<u64>], field: &Barrett) -> u64 {
    let p = field.p;
    let n = a.len();
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if piv != k {
            a.swap(piv, k);
            det = p - det;
        }
        det = field.reduce(det * a[k][k]);
        let inv = pow_mod(a[k][k], p - 2, p);
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k][k + 1..];
        for row in bottom.iter_mut() {
            if row[k] == 0 {
                continue;
            }
            let f = p - field.reduce(row[k] * inv);
            for (x, &y) in row[k + 1..].iter_mut().zip(pivot_row) {
                *x = field.reduce(*x + f * y);
            }
        }
    }
    det % p
}

/// Descending primes below 2^31, by trial division.
struct Primes31 {
    next: u64,
}

impl Primes31 {
    fn new() -> Self {
        Primes31 { next: (1 << 31) - 1 }
    }

    fn next_prime(&mut self) -> u64 {
        loop {
            let c = self.next;
            self.next -= 2;
            if (3..).step_by(2).take_while(|d| d * d <= c).all(|d| c % d != 0) {
                return c;
            }
        }
    }
}

fn sign_of(x: &BigInt) -> i8 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Determinant of a square integer matrix, destroying the input.
pub fn bareiss_integer_det(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Parity from the determinant formula.
pub fn formula_parity(dim: usize, sign_phi: i8, sign_psi: i8) -> u8 {
    let half = (i64::from(sign_phi) + i64::from(sign_psi)) / 2;
    (dim as i64 + 1 + half).rem_euclid(2) as u8
}

/// Evaluates the determinant formula on a prepared problem.
pub fn evaluate_prepared(
    prep: &Prepared,
    builder: Option<&FormBuilder>,
    seed: u64,
    max_retries: usize,
) -> Result<IntersectionResult, IntersectError> {
    if !prep.report.all_hold() {
        return Err(IntersectError::HypothesisFailed(prep.report.clone()));
    }
    let q = prep.quotient.as_ref().expect("finite dimension checked");
    if q.dim() == 0 {
        return Ok(IntersectionResult {
            parity: formula_parity(0, 1, 1),
            dim: 0,
            sign_phi: 1,
            sign_psi: 1,
            functional_seed: seed,
            retries: 0,
        });
    }
    let owned;
    let builder = match builder {
        Some(b) => b,
        None => {
            owned = FormBuilder::new(q);
            &owned
        }
    };
    let one = Polynomial::one(q.gb().ring());
    for attempt in 0..max_retries {
        let s = derive_seed(seed, attempt);
        let phi = random_functional(q, s)?;
        let sign_psi = builder.det_sign(&phi, &prep.g)?;
        if sign_psi == 0 {
            continue;
        }
        let sign_phi = builder.det_sign(&phi, &one)?;
        if sign_phi == 0 {
            return Err(IntersectError::SingularPhi(s));
        }
        return Ok(IntersectionResult {
            parity: formula_parity(q.dim(), sign_phi, sign_psi),
            dim: q.dim(),
            sign_phi,
            sign_psi,
            functional_seed: s,
            retries: attempt,
        });
    }
    Err(IntersectError::FunctionalExhausted(max_retries))
}

/// `I2(a, Σ)` for `M = {h = 0, g >= 0}`.
pub fn intersection_mod2(
    h: &[Polynomial],
    g: &Polynomial,
    a: &PolyMatrix,
    seed: u64,
    order: MonomialOrder,
    max_retries: usize,
) -> Result<IntersectionResult, IntersectError> {
    let prep = check_assumptions(h, g, a, order)?;
    evaluate_prepared(&prep, None, seed, max_retries)
}
