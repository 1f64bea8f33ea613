//! Floating-point oracle for the zeros of `G = (|β|² − 1, h, ã)`.
//!
//! Zeros are found by multi-start damped Newton. Regular zeros are then
//! polished with exactly evaluated residuals. Completeness of the zero set is
//! heuristic; the exact engine in [`crate::intersect`] is authoritative for
//! parities.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matmap::{build_a_tilde, MatrixError, PolyMatrix};
use crate::poly::{Polynomial, Rational, Ring};

/// Zeros with `|g| <` this are too close to the boundary to classify.
pub const BOUNDARY_GUARD: f64 = 1e-8;
/// Jacobians with `σ_min / σ_max` below this mark a singular zero.
pub const SINGULAR_THRESHOLD: f64 = 1e-8;
const MAX_HALVINGS: usize = 30;
const COARSE_TOL: f64 = 1e-8;
const POLISH_STEPS: usize = 4;
const DIVERGENCE_NORM: f64 = 1e6;
const DEFAULT_HALF_WIDTH: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("no Newton start converged")]
    NoConvergence,
    #[error("zero at x = {x:?} is singular (sigma_min/sigma_max = {rcond:e}); the map is not transverse there")]
    SingularZero { x: Vec<f64>, rcond: f64 },
    #[error("antipodal zeros at x = {x:?} have different local degrees")]
    AntipodalMismatch { x: Vec<f64> },
    #[error("sum of local degrees {0} is odd; the zero set is incomplete")]
    OddSignSum(i64),
    #[error("zero at x = {x:?} has |g| = {g:e}, too close to the boundary")]
    BoundaryTooClose { x: Vec<f64>, g: f64 },
    #[error("system is not square: {equations} equations in {unknowns} unknowns")]
    NotSquare { equations: usize, unknowns: usize },
    #[error("box has {got} intervals for {expected} variables, or an empty interval")]
    BadBox { expected: usize, got: usize },
    #[error("signed count needs n - k even, got {0}")]
    OddCodimension(usize),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub seeds: usize,
    /// Sampling box for the base variables; `None` derives it from `g`.
    pub bounds: Option<Vec<(f64, f64)>>,
    pub newton_tol: f64,
    pub max_iters: usize,
    pub dedup_radius: f64,
    pub rng_seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            seeds: 2000,
            bounds: None,
            newton_tol: 1e-12,
            max_iters: 100,
            dedup_radius: 1e-6,
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ZeroPoint {
    pub beta: Vec<f64>,
    pub x: Vec<f64>,
    pub residual: f64,
    pub jac_sign: i8,
    pub g_value: f64,
}

/// Converged point whose Jacobian is numerically singular.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SingularPoint {
    pub beta: Vec<f64>,
    pub x: Vec<f64>,
    pub residual: f64,
    pub rcond: f64,
    pub g_value: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZeroSet {
    pub zeros: Vec<ZeroPoint>,
    pub singular: Vec<SingularPoint>,
    pub converged_starts: usize,
    /// Antipodes that were added rather than found.
    pub closure_added: usize,
}

#[derive(Clone, Debug)]
struct Compiled {
    // (coefficient, [(variable, exponent)])
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

impl Compiled {
    fn new(p: &Polynomial) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let factors = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| (v, e))
                    .collect();
                (c.to_f64().unwrap_or(f64::NAN), factors)
            })
            .collect();
        Compiled { terms }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, f)| f.iter().fold(*c, |acc, &(v, e)| acc * x[v].powi(e as i32)))
            .sum()
    }
}

/// Square polynomial system whose first `nbeta` unknowns are the β block.
#[derive(Clone, Debug)]
pub struct OracleSystem {
    ring: Arc<Ring>,
    nbeta: usize,
    equations: Vec<Polynomial>,
    g: Polynomial,
    compiled: Vec<Compiled>,
    jac: Vec<Vec<Compiled>>,
}

impl OracleSystem {
    /// `g` is evaluated on the unknowns that follow the β block.
    pub fn new(
        ring: &Arc<Ring>,
        nbeta: usize,
        equations: Vec<Polynomial>,
        g: Polynomial,
    ) -> Result<Self, NumericError> {
        if equations.len() != ring.nvars() {
            return Err(NumericError::NotSquare {
                equations: equations.len(),
                unknowns: ring.nvars(),
            });
        }
        let compiled = equations.iter().map(Compiled::new).collect();
        let jac = equations
            .iter()
            .map(|e| (0..ring.nvars()).map(|v| Compiled::new(&e.derivative(v))).collect())
            .collect();
        Ok(OracleSystem {
            ring: ring.clone(),
            nbeta,
            equations,
            g,
            compiled,
            jac,
        })
    }

    /// `(|β|² − 1, h, ã)` over `(β, x)` for the matrix map `a`.
    pub fn from_matrix_map(
        h: &[Polynomial],
        g: &Polynomial,
        a: &PolyMatrix,
    ) -> Result<Self, NumericError> {
        let at = build_a_tilde(a);
        let mut eqs = vec![at.sphere_constraint.clone()];
        eqs.extend(h.iter().map(|p| at.lift(p)));
        eqs.extend(at.components.iter().cloned());
        OracleSystem::new(&at.ring, at.k, eqs, at.lift(g))
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn nbeta(&self) -> usize {
        self.nbeta
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn eval(&self, v: &[f64]) -> DVector<f64> {
        DVector::from_iterator(self.compiled.len(), self.compiled.iter().map(|c| c.eval(v)))
    }

    pub fn jacobian(&self, v: &[f64]) -> DMatrix<f64> {
        let n = self.compiled.len();
        DMatrix::from_fn(n, n, |i, j| self.jac[i][j].eval(v))
    }

    pub fn g_value(&self, v: &[f64]) -> f64 {
        Compiled::new(&self.g).eval(v)
    }

    fn exact_residual(&self, v: &[Rational]) -> (Vec<f64>, f64) {
        let vals: Vec<f64> = self
            .equations
            .iter()
            .map(|e| {
                e.eval_rational(v)
                    .expect("point length matches ring")
                    .to_f64()
                    .unwrap_or(f64::INFINITY)
            })
            .collect();
        let norm = vals.iter().map(|x| x * x).sum::<f64>().sqrt();
        (vals, norm)
    }
}

/// Reciprocal condition number `σ_min / σ_max`, signed by the determinant.
/// Row scaling alone cannot flag a zero whose Jacobian row degenerates
/// uniformly (a double root in one equation), the singular values can.
fn rcond(jac: &DMatrix<f64>) -> f64 {
    let sv = jac.clone().singular_values();
    let max = sv.max();
    if !(max > 0.0) {
        return 0.0;
    }
    let rcond = sv.min() / max;
    if jac.determinant() < 0.0 {
        -rcond
    } else {
        rcond
    }
}

/// Sign of the Jacobian determinant of `system` at the zero `z`.
pub fn local_degree_sign(system: &OracleSystem, z: &ZeroPoint) -> Result<i8, NumericError> {
    let v: Vec<f64> = z.beta.iter().chain(&z.x).copied().collect();
    sign_at(system, &v)
}

fn sign_at(system: &OracleSystem, v: &[f64]) -> Result<i8, NumericError> {
    let j = system.jacobian(v);
    let sd = rcond(&j);
    if sd.abs() < SINGULAR_THRESHOLD || !sd.is_finite() {
        return Err(NumericError::SingularZero {
            x: v[system.nbeta..].to_vec(),
            rcond: sd,
        });
    }
    Ok(if sd > 0.0 { 1 } else { -1 })
}

/// Default sampling box: `[-r, r]` per variable when `g = r² − |x|²`,
/// otherwise `[-3, 3]`.
pub fn default_bounds(g: &Polynomial, nvars: usize) -> Vec<(f64, f64)> {
    let r = ball_radius(g).unwrap_or(DEFAULT_HALF_WIDTH);
    vec![(-r, r); nvars]
}

fn ball_radius(g: &Polynomial) -> Option<f64> {
    let n = g.ring().nvars();
    let mut constant = None;
    let mut squares = 0;
    for (m, c) in g.terms() {
        if m.is_one() {
            constant = c.to_f64();
        } else if m.degree() == 2 && m.pure_power_var().is_some() && *c == Rational::from_integer((-1).into()) {
            squares += 1;
        } else {
            return None;
        }
    }
    match constant {
        Some(c) if c > 0.0 && squares == n => Some(c.sqrt()),
        _ => None,
    }
}

struct Start {
    v: Vec<f64>,
    residual: f64,
}

fn newton(system: &OracleSystem, mut v: Vec<f64>, cfg: &OracleConfig) -> Option<Start> {
    let mut f = system.eval(&v);
    let mut nf = f.norm();
    for _ in 0..cfg.max_iters {
        if nf == 0.0 {
            break;
        }
        let j = system.jacobian(&v);
        let step = match j.lu().solve(&(-&f)) {
            Some(s) => s,
            None => break,
        };
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = v.iter().zip(step.iter()).map(|(a, d)| a + t * d).collect();
            let ft = system.eval(&trial);
            let nt = ft.norm();
            if nt < nf {
                accepted = Some((trial, ft, nt));
                break;
            }
            t *= 0.5;
        }
        let Some((trial, ft, nt)) = accepted else { break };
        let moved = t * step.norm();
        v = trial;
        f = ft;
        nf = nt;
        if v.iter().any(|x| !x.is_finite() || x.abs() > DIVERGENCE_NORM) {
            return None;
        }
        if moved < 1e-15 * (1.0 + v.iter().map(|x| x * x).sum::<f64>().sqrt()) {
            break;
        }
    }
    (nf < COARSE_TOL).then_some(Start { v, residual: nf })
}

/// Newton steps with exactly evaluated residuals. Returns the best f64 point
/// and the exact residual norm of `G` at that point.
fn polish(system: &OracleSystem, v: &[f64]) -> (Vec<f64>, f64) {
    let to_exact = |p: &[f64]| -> Vec<Rational> {
        p.iter()
            .map(|x| Rational::from_float(*x).expect("finite coordinate"))
            .collect()
    };
    let mut exact = to_exact(v);
    let (mut vals, mut norm) = system.exact_residual(&exact);
    let mut best = (v.to_vec(), norm);
    for _ in 0..POLISH_STEPS {
        if norm == 0.0 {
            break;
        }
        let approx: Vec<f64> = exact.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        let j = system.jacobian(&approx);
        let rhs = DVector::from_iterator(vals.len(), vals.iter().map(|x| -x));
        let Some(step) = j.lu().solve(&rhs) else { break };
        for (e, d) in exact.iter_mut().zip(step.iter()) {
            if let Some(d) = Rational::from_float(*d) {
                *e += d;
            }
        }
        (vals, norm) = system.exact_residual(&exact);
        let rounded: Vec<f64> = exact.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        let (_, at_rounded) = system.exact_residual(&to_exact(&rounded));
        if at_rounded < best.1 {
            best = (rounded, at_rounded);
        }
    }
    best
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn sample_start(rng: &mut ChaCha8Rng, nbeta: usize, bounds: &[(f64, f64)]) -> Vec<f64> {
    let mut v = Vec::with_capacity(nbeta + bounds.len());
    if nbeta > 0 {
        let beta: Vec<f64> = (0..nbeta).map(|_| rng.sample(StandardNormal)).collect();
        let n = beta.iter().map(|b: &f64| b * b).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        v.extend(beta.iter().map(|b| b / n));
    }
    v.extend(bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)));
    v
}

/// Finds the zeros of a square system by multi-start Newton.
///
/// Returns [`NumericError::NoConvergence`] when no start converged.
pub fn solve_zeros(system: &OracleSystem, cfg: &OracleConfig) -> Result<ZeroSet, NumericError> {
    let nx = system.ring.nvars() - system.nbeta;
    let bounds = match &cfg.bounds {
        Some(b) => b.clone(),
        None => default_bounds(&system.g_base(), nx),
    };
    if bounds.len() != nx || bounds.iter().any(|(lo, hi)| !(lo <= hi)) {
        return Err(NumericError::BadBox {
            expected: nx,
            got: bounds.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut found: Vec<Start> = (0..cfg.seeds)
        .filter_map(|_| newton(system, sample_start(&mut rng, system.nbeta, &bounds), cfg))
        .collect();
    let converged_starts = found.len();
    if found.is_empty() {
        return Err(NumericError::NoConvergence);
    }

    // deterministic merge: lexicographic order, then greedy clustering
    found.sort_by(|a, b| {
        a.v.iter()
            .zip(&b.v)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut reps: Vec<Start> = Vec::new();
    for s in found {
        match reps.iter_mut().find(|r| distance(&r.v, &s.v) < cfg.dedup_radius) {
            Some(r) if s.residual < r.residual => *r = s,
            Some(_) => {}
            None => reps.push(s),
        }
    }

    let mut out = ZeroSet {
        converged_starts,
        ..ZeroSet::default()
    };
    let found_points: Vec<Vec<f64>> = reps.iter().map(|r| r.v.clone()).collect();
    let was_found = |w: &[f64]| found_points.iter().any(|u| distance(u, w) < cfg.dedup_radius);
    let mut pending: Vec<(Vec<f64>, bool)> = reps.into_iter().map(|r| (r.v, false)).collect();
    while let Some((v, added)) = pending.pop() {
        let known = |w: &[f64]| {
            out.zeros
                .iter()
                .map(|z| z.beta.iter().chain(&z.x).copied().collect::<Vec<f64>>())
                .chain(out.singular.iter().map(|z| z.beta.iter().chain(&z.x).copied().collect()))
                .any(|u| distance(&u, w) < cfg.dedup_radius)
        };
        if known(&v) {
            continue;
        }
        let mut sd = rcond(&system.jacobian(&v));
        let mut regular = None;
        if sd.abs() >= SINGULAR_THRESHOLD && sd.is_finite() {
            let (p, residual) = polish(system, &v);
            // polishing can walk onto a degenerate zero the coarse point only approached
            sd = rcond(&system.jacobian(&p));
            if sd.abs() >= SINGULAR_THRESHOLD && sd.is_finite() {
                if residual >= cfg.newton_tol {
                    continue;
                }
                regular = Some((p, residual));
            }
        }
        match regular {
            None => {
                out.singular.push(SingularPoint {
                    beta: v[..system.nbeta].to_vec(),
                    x: v[system.nbeta..].to_vec(),
                    residual: system.eval(&v).norm(),
                    rcond: sd,
                    g_value: system.g_value(&v),
                });
            }
            Some((p, residual)) => {
                if known(&p) {
                    continue;
                }
                out.zeros.push(ZeroPoint {
                    beta: p[..system.nbeta].to_vec(),
                    x: p[system.nbeta..].to_vec(),
                    residual,
                    jac_sign: if sd > 0.0 { 1 } else { -1 },
                    g_value: system.g_value(&p),
                });
                if added && !was_found(&p) {
                    out.closure_added += 1;
                }
            }
        }
        if system.nbeta > 0 {
            let mut anti = v.clone();
            for b in &mut anti[..system.nbeta] {
                *b = -*b;
            }
            pending.push((anti, true));
        }
    }
    let key = |beta: &[f64], x: &[f64]| -> Vec<f64> { x.iter().chain(beta).copied().collect() };
    let cmp = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    };
    out.zeros.sort_by(|a, b| cmp(&key(&a.beta, &a.x), &key(&b.beta, &b.x)));
    out.singular.sort_by(|a, b| cmp(&key(&a.beta, &a.x), &key(&b.beta, &b.x)));
    Ok(out)
}

impl OracleSystem {
    // `g` over the base variables, for box derivation
    fn g_base(&self) -> Polynomial {
        let names: Vec<&str> = self.ring.vars()[self.nbeta..].iter().map(String::as_str).collect();
        let base = Ring::new(&names);
        let mut out = Polynomial::zero(&base);
        for (m, c) in self.g.terms() {
            let exps = &m.exponents()[self.nbeta..];
            out += &Polynomial::monomial(&base, crate::poly::Monomial::from_exponents(exps), c.clone());
        }
        out
    }
}

/// Reruns the solver with twice the starts and reports whether the zero set
/// is unchanged. Multi-start Newton has no completeness guarantee; this is
/// the heuristic check.
pub fn stable_under_doubling(
    system: &OracleSystem,
    cfg: &OracleConfig,
    first: &ZeroSet,
) -> Result<bool, NumericError> {
    let doubled = OracleConfig {
        seeds: cfg.seeds * 2,
        ..cfg.clone()
    };
    let second = match solve_zeros(system, &doubled) {
        Ok(s) => s,
        Err(NumericError::NoConvergence) => ZeroSet::default(),
        Err(e) => return Err(e),
    };
    let points = |z: &ZeroSet| -> Vec<Vec<f64>> {
        z.zeros
            .iter()
            .map(|p| p.beta.iter().chain(&p.x).copied().collect())
            .chain(z.singular.iter().map(|p| p.beta.iter().chain(&p.x).copied().collect()))
            .collect()
    };
    let (a, b) = (points(first), points(&second));
    let covered = |from: &[Vec<f64>], to: &[Vec<f64>]| {
        from.iter().all(|u| to.iter().any(|w| distance(u, w) < cfg.dedup_radius))
    };
    Ok(a.len() == b.len() && covered(&a, &b) && covered(&b, &a))
}

/// Zeros of the squared system with `g > 0`, after the boundary guard and
/// transversality checks.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorZeros {
    pub zeros: Vec<ZeroPoint>,
    pub converged_starts: usize,
    pub closure_added: usize,
}

/// Solves and keeps the zeros with `g > 0`. Failure to converge anywhere is
/// read as an empty zero set.
pub fn interior_zeros(system: &OracleSystem, cfg: &OracleConfig) -> Result<InteriorZeros, NumericError> {
    let set = match solve_zeros(system, cfg) {
        Ok(s) => s,
        Err(NumericError::NoConvergence) => ZeroSet::default(),
        Err(e) => return Err(e),
    };
    for s in &set.singular {
        if s.g_value.abs() < BOUNDARY_GUARD {
            return Err(NumericError::BoundaryTooClose { x: s.x.clone(), g: s.g_value });
        }
        if s.g_value > 0.0 {
            return Err(NumericError::SingularZero {
                x: s.x.clone(),
                rcond: s.rcond,
            });
        }
    }
    let mut zeros = Vec::new();
    for z in set.zeros {
        if z.g_value.abs() < BOUNDARY_GUARD {
            return Err(NumericError::BoundaryTooClose { x: z.x, g: z.g_value });
        }
        if z.g_value > 0.0 {
            zeros.push(z);
        }
    }
    Ok(InteriorZeros {
        zeros,
        converged_starts: set.converged_starts,
        closure_added: set.closure_added,
    })
}

/// `½ Σ jac_sign` over interior zeros, with antipodal sign agreement checked.
pub fn signed_half_sum(zeros: &[ZeroPoint], radius: f64) -> Result<i64, NumericError> {
    for z in zeros {
        let anti: Vec<f64> = z.beta.iter().map(|b| -b).collect();
        let partner = zeros
            .iter()
            .find(|w| distance(&w.x, &z.x) < radius && distance(&w.beta, &anti) < radius);
        match partner {
            Some(w) if w.jac_sign == z.jac_sign => {}
            _ => return Err(NumericError::AntipodalMismatch { x: z.x.clone() }),
        }
    }
    let sum: i64 = zeros.iter().map(|z| i64::from(z.jac_sign)).sum();
    if sum % 2 != 0 {
        return Err(NumericError::OddSignSum(sum));
    }
    Ok(sum / 2)
}

/// Signed intersection number `½ Σ deg` for `n − k` even.
pub fn intersection_signed_numeric(
    h: &[Polynomial],
    g: &Polynomial,
    a: &PolyMatrix,
    cfg: &OracleConfig,
) -> Result<i64, NumericError> {
    let codim = a.rows() - a.cols();
    if codim % 2 != 0 {
        return Err(NumericError::OddCodimension(codim));
    }
    let system = OracleSystem::from_matrix_map(h, g, a)?;
    let zeros = interior_zeros(&system, cfg)?;
    signed_half_sum(&zeros.zeros, cfg.dedup_radius)
}

/// Number of antipodal zero pairs with `g > 0`, mod 2.
pub fn intersection_mod2_numeric(
    h: &[Polynomial],
    g: &Polynomial,
    a: &PolyMatrix,
    cfg: &OracleConfig,
) -> Result<u8, NumericError> {
    let system = OracleSystem::from_matrix_map(h, g, a)?;
    let zeros = interior_zeros(&system, cfg)?;
    Ok(((zeros.zeros.len() / 2) % 2) as u8)
}

/// Jacobian by central differences; used to cross-check analytic ones.
pub fn finite_difference_jacobian(system: &OracleSystem, v: &[f64], step: f64) -> DMatrix<f64> {
    let n = v.len();
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut plus = v.to_vec();
        let mut minus = v.to_vec();
        plus[j] += step;
        minus[j] -= step;
        let d = (system.eval(&plus) - system.eval(&minus)) / (2.0 * step);
        out.set_column(j, &d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn system(vars: &[&str], nbeta: usize, eqs: &[&str], g: &str) -> OracleSystem {
        let ring = Ring::new(vars);
        let eqs = eqs.iter().map(|s| parse_polynomial(s, &ring).unwrap()).collect();
        OracleSystem::new(&ring, nbeta, eqs, parse_polynomial(g, &ring).unwrap()).unwrap()
    }

    fn zero_at(v: &[f64]) -> ZeroPoint {
        ZeroPoint {
            beta: vec![],
            x: v.to_vec(),
            residual: 0.0,
            jac_sign: 0,
            g_value: 1.0,
        }
    }

    #[test]
    fn identity_and_reflection_signs() {
        let id = system(&["u", "v"], 0, &["u", "v"], "1");
        assert_eq!(local_degree_sign(&id, &zero_at(&[0.0, 0.0])), Ok(1));
        let refl = system(&["u", "v"], 0, &["u", "-v"], "1");
        assert_eq!(local_degree_sign(&refl, &zero_at(&[0.0, 0.0])), Ok(-1));
    }

    #[test]
    fn not_square_is_rejected() {
        let ring = Ring::new(&["u", "v"]);
        let eqs = vec![Polynomial::var(&ring, 0)];
        assert!(matches!(
            OracleSystem::new(&ring, 0, eqs, Polynomial::one(&ring)),
            Err(NumericError::NotSquare { .. })
        ));
    }

    #[test]
    fn circle_meets_line_in_two_points() {
        let s = system(&["x", "y"], 0, &["x^2+y^2-1", "x-y"], "1");
        let cfg = OracleConfig { seeds: 50, ..OracleConfig::default() };
        let set = solve_zeros(&s, &cfg).unwrap();
        assert_eq!(set.zeros.len(), 2);
        for z in &set.zeros {
            assert!(z.residual < 1e-12);
            assert!((z.x[0].abs() - 0.5f64.sqrt()).abs() < 1e-12);
        }
        // the two crossings have opposite orientation
        assert_eq!(set.zeros[0].jac_sign, -set.zeros[1].jac_sign);
    }

    #[test]
    fn double_root_is_singular() {
        let s = system(&["b1", "b2", "x"], 2, &["b1^2+b2^2-1", "b1", "x^2"], "1");
        let cfg = OracleConfig { seeds: 40, ..OracleConfig::default() };
        let set = solve_zeros(&s, &cfg).unwrap();
        assert!(set.zeros.is_empty());
        assert_eq!(set.singular.len(), 2);
        assert!(matches!(interior_zeros(&s, &cfg), Err(NumericError::SingularZero { .. })));
    }

    #[test]
    fn antipodes_are_closed() {
        // β ∈ S¹ with β1 = 0 and x = 1: zeros (0, ±1, 1)
        let s = system(&["b1", "b2", "x"], 2, &["b1^2+b2^2-1", "b1", "x-1"], "x");
        let cfg = OracleConfig { seeds: 3, ..OracleConfig::default() };
        let set = solve_zeros(&s, &cfg).unwrap();
        assert_eq!(set.zeros.len(), 2);
        assert!((set.zeros[0].beta[1] + set.zeros[1].beta[1]).abs() < 1e-12);
    }

    #[test]
    fn empty_zero_set() {
        // the first entry never vanishes, so the column is never zero
        let ring = Ring::new(&["x", "y", "z"]);
        let h = vec![parse_polynomial("x^2+y^2+z^2-1", &ring).unwrap()];
        let entries = ["x^2+y^2+z^2+1", "y"];
        let a = PolyMatrix::new(
            &ring,
            2,
            1,
            entries.iter().map(|s| parse_polynomial(s, &ring).unwrap()).collect(),
        )
        .unwrap();
        let cfg = OracleConfig { seeds: 200, ..OracleConfig::default() };
        let g = Polynomial::one(&ring);
        assert_eq!(intersection_mod2_numeric(&h, &g, &a, &cfg), Ok(0));
        assert_eq!(intersection_signed_numeric(&h, &g, &a, &cfg), Err(NumericError::OddCodimension(1)));
    }

    #[test]
    fn ball_box() {
        let ring = Ring::new(&["x", "y"]);
        let g = parse_polynomial("9 - x^2 - y^2", &ring).unwrap();
        assert_eq!(default_bounds(&g, 2), vec![(-3.0, 3.0); 2]);
        let g = parse_polynomial("z", &Ring::new(&["z"])).unwrap();
        assert_eq!(default_bounds(&g, 1), vec![(-3.0, 3.0)]);
        let g = parse_polynomial("4 - x^2 - y^2", &ring).unwrap();
        assert_eq!(default_bounds(&g, 2), vec![(-2.0, 2.0); 2]);
    }
}
