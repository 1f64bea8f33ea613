//! Cross-caps of `f|M` for `f: R^{m+l} -> R^{2m-1}` and
//! `M = h^{-1}(0) ∩ {g >= 0}`, through the matrix map `d(h,f)` with values in
//! `(2m-1+l) x (m+l)` matrices.
//!
//! For `m` even the number of cross-caps mod 2 is the mod-2 intersection
//! number of `d(h,f)|M` with the corank-1 stratum; for `m` odd the algebraic
//! sum is a signed count of zeros of the associated `ã`.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::groebner::{buchberger, IdealSpan, QuotientAlgebra};
use crate::intersect::{
    check_assumptions, evaluate_prepared, IntersectError, IntersectionResult, DEFAULT_MAX_RETRIES,
};
use crate::matmap::{combinations, jacobian, MatrixError, PolyMatrix};
use crate::numeric::{
    interior_zeros, signed_half_sum, solve_zeros, NumericError, OracleConfig, OracleSystem,
    BOUNDARY_GUARD,
};
use crate::poly::{MonomialOrder, PolyError, Polynomial, Ring};

/// Global orientation convention for signed cross-cap sums. Whitney's sign
/// depends on orientations that are fixed only up to one global choice; this
/// one reproduces the reference values of the hyperboloid corpus case.
pub const ORIENTATION_SIGN: i64 = 1;

/// Relative singular-value threshold for numeric rank decisions at
/// oracle-found singular points.
pub const RANK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CrossCapError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("{0} needs m {1}, got m = {2}")]
    WrongDimensionParity(&'static str, &'static str, usize),
    #[error("f|M is not known to have only cross-caps ({0:?})")]
    NotOnlyCrossCaps(OnlyCrossCaps),
    #[error("signed sum {signed} disagrees with algebraic parity {parity}")]
    ParityMismatch { signed: i64, parity: u8 },
    #[error(transparent)]
    Intersect(#[from] IntersectError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OnlyCrossCaps {
    VerifiedExact,
    VerifiedNumeric,
    NotOnlyCrosscaps,
    Inconclusive,
}

impl OnlyCrossCaps {
    pub fn is_verified(self) -> bool {
        matches!(self, OnlyCrossCaps::VerifiedExact | OnlyCrossCaps::VerifiedNumeric)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossCapMode {
    Parity,
    SignedSum,
}

/// One oracle-found singular point of `f|M`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SingularSummary {
    pub x: Vec<f64>,
    pub g_value: f64,
    /// Local degree of the `ã` zero, 0 when that zero is degenerate.
    pub jac_sign: i8,
    pub rank_dhf: usize,
    pub mu_regular: bool,
}

impl SingularSummary {
    pub fn is_crosscap(&self, p: &CrossCapProblem) -> bool {
        self.rank_dhf + 1 == p.m + p.l && self.mu_regular
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CrossCapReport {
    pub mode: CrossCapMode,
    pub value: i64,
    pub only_crosscaps: OnlyCrossCaps,
    pub zero_census: Vec<SingularSummary>,
    /// Exact mod-2 intersection number of `d(h,f)|M`, when its hypotheses hold.
    pub algebraic: Option<IntersectionResult>,
}

#[derive(Clone, Debug)]
pub struct CrossCapProblem {
    pub ring: Arc<Ring>,
    pub h: Vec<Polynomial>,
    pub g: Polynomial,
    pub f: Vec<Polynomial>,
    pub m: usize,
    pub l: usize,
}

impl CrossCapProblem {
    /// `m` and `l` are read off the ring size and `h`.
    pub fn new(h: Vec<Polynomial>, g: Polynomial, f: Vec<Polynomial>) -> Result<Self, CrossCapError> {
        let ring = g.ring().clone();
        if h.iter().chain(&f).any(|p| p.ring() != &ring) {
            return Err(CrossCapError::Poly(PolyError::RingMismatch));
        }
        let l = h.len();
        if l == 0 {
            return Err(CrossCapError::Shape(
                "M must be cut out by at least one equation h (l >= 1)".into(),
            ));
        }
        let nvars = ring.nvars();
        if nvars <= l {
            return Err(CrossCapError::Shape(format!(
                "{nvars} variables leave no room for a manifold cut out by {l} equations"
            )));
        }
        let m = nvars - l;
        if m < 2 {
            return Err(CrossCapError::Shape("cross-caps need m >= 2".into()));
        }
        if f.len() != 2 * m - 1 {
            return Err(CrossCapError::Shape(format!(
                "f must have 2m-1 = {} components for m = {m}, got {}",
                2 * m - 1,
                f.len()
            )));
        }
        Ok(CrossCapProblem { ring, h, g, f, m, l })
    }
}

/// `d(h,f)`: row `i` is the gradient of the `i`-th component of `(h, f)`, so
/// column `j` is the partial derivative by variable `j`.
pub fn build_dhf(p: &CrossCapProblem) -> PolyMatrix {
    let maps: Vec<Polynomial> = p.h.iter().chain(&p.f).cloned().collect();
    jacobian(&maps, &p.ring)
}

/// All maximal minors of `d(h,f)`.
pub fn build_mu(p: &CrossCapProblem) -> Vec<Polynomial> {
    build_dhf(p)
        .minors(p.m + p.l)
        .expect("m + l <= min(rows, cols)")
}

/// Outcome of the exact checks (i) and (ii); `None` when undecided.
fn exact_checks(p: &CrossCapProblem, dhf: &PolyMatrix, mu: &[Polynomial]) -> Result<bool, CrossCapError> {
    let k = p.m + p.l;
    let mut j: Vec<Polynomial> = p.h.clone();
    j.extend(mu.iter().cloned());
    let gb_j = buchberger(&j, MonomialOrder::DegRevLex);
    let q = match QuotientAlgebra::new(&gb_j) {
        Ok(q) => q,
        // a positive-dimensional singular set is never only cross-caps
        Err(_) => return Ok(false),
    };
    if q.dim() == 0 {
        return Ok(true);
    }
    // (i) corank <= 1 on the singular set: J + (k-1)-minors = (1)
    let mut span = IdealSpan::new(&q);
    let mut unit = false;
    for minor in dhf.minors(k - 1)? {
        if span.add(&minor)? {
            unit = true;
            break;
        }
    }
    if !unit {
        return Ok(false);
    }
    // (ii) every zero of mu|h^{-1}(0) is regular: J + k-minors of d(h, mu) = (1)
    let mut maps = p.h.clone();
    maps.extend(mu.iter().cloned());
    let jac = jacobian(&maps, &p.ring);
    // entries reduced first so the determinants stay small
    let reduced: Vec<Polynomial> = jac
        .entries()
        .iter()
        .map(|e| gb_j.normal_form(e))
        .collect::<Result<_, _>>()?;
    let reduced = PolyMatrix::new(&p.ring, jac.rows(), jac.cols(), reduced)?;
    let mut span = IdealSpan::new(&q);
    for rows in combinations(reduced.rows(), k) {
        let det = quotient_det(&q, &reduced, &rows)?;
        if span.add(&det)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Determinant of the `rows x all-columns` square submatrix, computed in the
/// quotient algebra by cofactor expansion along the first row.
fn quotient_det(q: &QuotientAlgebra, m: &PolyMatrix, rows: &[usize]) -> Result<Polynomial, CrossCapError> {
    fn rec(
        q: &QuotientAlgebra,
        m: &PolyMatrix,
        rows: &[usize],
        cols: &[usize],
    ) -> Result<Polynomial, CrossCapError> {
        if rows.len() == 1 {
            return Ok(m.get(rows[0], cols[0]).clone());
        }
        let mut acc = Polynomial::zero(m.ring());
        for (i, &c) in cols.iter().enumerate() {
            let entry = m.get(rows[0], c);
            if entry.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&d| d != c).collect();
            let sub = rec(q, m, &rows[1..], &rest)?;
            let term = q.mul(entry, &sub)?;
            acc = if i % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        Ok(acc)
    }
    let cols: Vec<usize> = (0..m.cols()).collect();
    rec(q, m, rows, &cols)
}

fn numeric_rank(values: &[f64], rows: usize, cols: usize) -> (usize, f64) {
    let m = DMatrix::from_row_slice(rows, cols, values);
    let sv = m.singular_values();
    let max = sv.max();
    if !(max > 0.0) {
        return (0, 0.0);
    }
    let rank = sv.iter().filter(|s| **s > RANK_TOL * max).count();
    (rank, sv.min() / max)
}

/// Rank data of `d(h,f)` and `d(h, mu)` at a point.
fn classify_point(
    p: &CrossCapProblem,
    dhf: &PolyMatrix,
    dmu: &PolyMatrix,
    x: &[f64],
    g_value: f64,
    jac_sign: i8,
) -> SingularSummary {
    let (rank_dhf, _) = numeric_rank(&dhf.eval_f64(x), dhf.rows(), dhf.cols());
    let (rank_mu, _) = numeric_rank(&dmu.eval_f64(x), dmu.rows(), dmu.cols());
    SingularSummary {
        x: x.to_vec(),
        g_value,
        jac_sign,
        rank_dhf,
        mu_regular: rank_mu == p.m + p.l,
    }
}

/// Singular points of `f|M` with `g > 0` found by the oracle, one per
/// antipodal pair, classified numerically.
pub fn singular_census(
    p: &CrossCapProblem,
    cfg: &OracleConfig,
) -> Result<Vec<SingularSummary>, CrossCapError> {
    let dhf = build_dhf(p);
    let mu = build_mu(p);
    let mut maps = p.h.clone();
    maps.extend(mu);
    let dmu = jacobian(&maps, &p.ring);
    let system = OracleSystem::from_matrix_map(&p.h, &p.g, &dhf)?;
    let set = match solve_zeros(&system, cfg) {
        Ok(s) => s,
        Err(NumericError::NoConvergence) => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let mut points: Vec<(Vec<f64>, f64, i8)> = set
        .zeros
        .iter()
        .map(|z| (z.x.clone(), z.g_value, z.jac_sign))
        .chain(set.singular.iter().map(|s| (s.x.clone(), s.g_value, 0)))
        .collect();
    for (x, g, _) in &points {
        if g.abs() < BOUNDARY_GUARD {
            return Err(NumericError::BoundaryTooClose { x: x.clone(), g: *g }.into());
        }
    }
    points.retain(|(_, g, _)| *g > 0.0);
    // antipodal zeros share x
    let mut census: Vec<SingularSummary> = Vec::new();
    for (x, g, sign) in points {
        let dup = census.iter().any(|c| {
            c.x.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() < cfg.dedup_radius
        });
        if !dup {
            census.push(classify_point(p, &dhf, &dmu, &x, g, sign));
        }
    }
    Ok(census)
}

/// Decides whether every singular point of `f|M` is a cross-cap.
///
/// The exact test is sufficient, not necessary; when it fails the oracle's
/// singular points with `g > 0` are checked one by one.
pub fn verify_only_crosscaps(
    p: &CrossCapProblem,
    cfg: &OracleConfig,
) -> Result<(OnlyCrossCaps, Vec<SingularSummary>), CrossCapError> {
    let dhf = build_dhf(p);
    let mu = build_mu(p);
    let exact = exact_checks(p, &dhf, &mu)?;
    let census = match singular_census(p, cfg) {
        Ok(c) => c,
        Err(CrossCapError::Numeric(_)) if exact => Vec::new(),
        Err(CrossCapError::Numeric(_)) => return Ok((OnlyCrossCaps::Inconclusive, Vec::new())),
        Err(e) => return Err(e),
    };
    if exact {
        return Ok((OnlyCrossCaps::VerifiedExact, census));
    }
    let status = if census.iter().all(|c| c.is_crosscap(p)) {
        OnlyCrossCaps::VerifiedNumeric
    } else {
        OnlyCrossCaps::NotOnlyCrosscaps
    };
    Ok((status, census))
}

/// Number of cross-caps mod 2 (`m` even).
pub fn crosscap_parity(p: &CrossCapProblem, seed: u64) -> Result<IntersectionResult, CrossCapError> {
    crosscap_parity_with(p, seed, MonomialOrder::DegRevLex, DEFAULT_MAX_RETRIES)
}

pub fn crosscap_parity_with(
    p: &CrossCapProblem,
    seed: u64,
    order: MonomialOrder,
    max_retries: usize,
) -> Result<IntersectionResult, CrossCapError> {
    if p.m % 2 != 0 {
        return Err(CrossCapError::WrongDimensionParity("parity", "even", p.m));
    }
    algebraic_parity(p, seed, order, max_retries)
}

fn algebraic_parity(
    p: &CrossCapProblem,
    seed: u64,
    order: MonomialOrder,
    max_retries: usize,
) -> Result<IntersectionResult, CrossCapError> {
    let dhf = build_dhf(p);
    let prep = check_assumptions(&p.h, &p.g, &dhf, order)?;
    Ok(evaluate_prepared(&prep, None, seed, max_retries)?)
}

/// Algebraic sum of cross-caps (`m` odd), `(-1)^(l+1) · ½ Σ deg` over the
/// zeros of `ã` for `d(h,f)` with `g > 0`.
pub fn crosscap_sum(p: &CrossCapProblem, cfg: &OracleConfig) -> Result<i64, CrossCapError> {
    if p.m % 2 != 1 {
        return Err(CrossCapError::WrongDimensionParity("signed sum", "odd", p.m));
    }
    let dhf = build_dhf(p);
    let system = OracleSystem::from_matrix_map(&p.h, &p.g, &dhf)?;
    let zeros = interior_zeros(&system, cfg)?;
    let half = signed_half_sum(&zeros.zeros, cfg.dedup_radius)?;
    let sign = if p.l % 2 == 1 { 1 } else { -1 };
    Ok(ORIENTATION_SIGN * sign * half)
}

/// Full analysis: mode chosen by the parity of `m`, with the only-cross-caps
/// status and, when available, the exact parity cross-check.
pub fn analyze(
    p: &CrossCapProblem,
    cfg: &OracleConfig,
    seed: u64,
    order: MonomialOrder,
    max_retries: usize,
) -> Result<CrossCapReport, CrossCapError> {
    let (status, census) = verify_only_crosscaps(p, cfg)?;
    if p.m % 2 == 0 {
        let r = crosscap_parity_with(p, seed, order, max_retries)?;
        return Ok(CrossCapReport {
            mode: CrossCapMode::Parity,
            value: i64::from(r.parity),
            only_crosscaps: status,
            zero_census: census,
            algebraic: Some(r),
        });
    }
    if !status.is_verified() {
        return Err(CrossCapError::NotOnlyCrossCaps(status));
    }
    let value = crosscap_sum(p, cfg)?;
    let algebraic = match algebraic_parity(p, seed, order, max_retries) {
        Ok(r) => Some(r),
        Err(CrossCapError::Intersect(IntersectError::HypothesisFailed(_))) => None,
        Err(e) => return Err(e),
    };
    if let Some(r) = &algebraic {
        if value.rem_euclid(2) as u8 != r.parity {
            return Err(CrossCapError::ParityMismatch {
                signed: value,
                parity: r.parity,
            });
        }
    }
    Ok(CrossCapReport {
        mode: CrossCapMode::SignedSum,
        value,
        only_crosscaps: status,
        zero_census: census,
        algebraic,
    })
}
