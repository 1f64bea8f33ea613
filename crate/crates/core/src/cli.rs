//! Problem files, command dispatch and the JSON report.
//!
//! A problem file is TOML:
//!
//! ```toml
//! name = "sphere-half-a"
//! variables = ["x", "y", "z"]
//! h = ["x^2+y^2+z^2-1"]
//! g = "-z"
//! mode = "intersect-mod2"
//! seed = 1
//! matrix = [["10*x^2*z+4*x*y+10*x", "2*x^2*y+7*x^2+6*y"], ...]
//!
//! [numeric]
//! seeds = 2000
//! box = [[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
//! ```
//!
//! Cross-cap modes take `f = [...]` instead of `matrix`. An optional
//! `[expect]` table is read only by the regression corpus.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::crosscap::{
    analyze, build_dhf, crosscap_parity_with, verify_only_crosscaps, CrossCapError, CrossCapProblem,
    OnlyCrossCaps, SingularSummary,
};
use crate::intersect::{
    check_assumptions, evaluate_prepared, AssumptionReport, IntersectError, DEFAULT_MAX_RETRIES,
};
use crate::matmap::PolyMatrix;
use crate::numeric::{
    interior_zeros, signed_half_sum, solve_zeros, stable_under_doubling, NumericError, OracleConfig,
    OracleSystem, ZeroPoint, ZeroSet,
};
use crate::poly::{parse_polynomial, MonomialOrder, Polynomial, Ring};

pub const EXIT_OK: i32 = 0;
/// Unexpected engine failure (exhausted functionals, singular `[Phi]`).
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    IntersectMod2,
    IntersectSigned,
    CrosscapParity,
    CrosscapSum,
    Verify,
    Oracle,
}

impl Mode {
    /// Oracle mode takes either map kind; a cross-cap `f` is counted through `d(h,f)`.
    fn wants_matrix(self, file: &ProblemFile) -> bool {
        match self {
            Mode::IntersectMod2 | Mode::IntersectSigned => true,
            Mode::Oracle => file.f.is_none(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OrderName {
    #[default]
    Degrevlex,
    Lex,
}

impl From<OrderName> for MonomialOrder {
    fn from(o: OrderName) -> Self {
        match o {
            OrderName::Degrevlex => MonomialOrder::DegRevLex,
            OrderName::Lex => MonomialOrder::Lex,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericOverrides {
    pub seeds: Option<usize>,
    #[serde(rename = "box")]
    pub bounds: Option<Vec<(f64, f64)>>,
    pub newton_tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub dedup_radius: Option<f64>,
}

/// Expected outcome, used by the regression corpus only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    /// Where the expected value comes from: `reference` (published value),
    /// `derived` (computed once by an in-repo oracle) or `trivial`.
    pub origin: String,
    pub value: Option<i64>,
    pub dim: Option<usize>,
    pub only_crosscaps: Option<OnlyCrossCaps>,
    #[serde(default)]
    pub tolerance: i64,
}

/// Problem file as written on disk.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: Option<String>,
    pub variables: Vec<String>,
    #[serde(default)]
    pub h: Vec<String>,
    #[serde(default = "default_g")]
    pub g: String,
    pub matrix: Option<Vec<Vec<String>>>,
    pub f: Option<Vec<String>>,
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    pub order: Option<OrderName>,
    pub max_retries: Option<usize>,
    #[serde(default)]
    pub numeric: NumericOverrides,
    pub expect: Option<Expectation>,
}

fn default_g() -> String {
    "1".into()
}

/// Command-line overrides; `None` keeps the file's value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub seeds: Option<usize>,
    pub bounds: Option<Vec<(f64, f64)>>,
    pub order: Option<OrderName>,
    pub max_retries: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    Matrix(PolyMatrix),
    F(Vec<Polynomial>),
}

/// Parsed and validated problem with overrides applied.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub name: Option<String>,
    pub ring: Arc<Ring>,
    pub h: Vec<Polynomial>,
    pub g: Polynomial,
    pub map: MapSpec,
    pub mode: Mode,
    pub seed: u64,
    pub order: OrderName,
    pub max_retries: usize,
    pub oracle: OracleConfig,
    pub echo: InputsEcho,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputsEcho {
    pub variables: Vec<String>,
    pub h: Vec<String>,
    pub g: String,
    pub matrix: Option<Vec<Vec<String>>>,
    pub f: Option<Vec<String>>,
    pub seed: u64,
    pub order: OrderName,
    pub max_retries: usize,
    pub numeric: NumericEcho,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericEcho {
    pub seeds: usize,
    /// `None` when the box is derived from `g`.
    #[serde(rename = "box")]
    pub bounds: Option<Vec<(f64, f64)>>,
    pub newton_tol: f64,
    pub max_iters: usize,
    pub dedup_radius: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct ParseError(pub String);

fn perr(msg: impl Into<String>) -> ParseError {
    ParseError(msg.into())
}

pub fn read_problem_file(path: &Path) -> Result<ProblemFile, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| perr(format!("{}: {e}", path.display())))?;
    parse_problem_text(&text).map_err(|e| perr(format!("{}: {}", path.display(), e.0)))
}

pub fn parse_problem_text(text: &str) -> Result<ProblemFile, ParseError> {
    toml::from_str(text).map_err(|e| perr(e.to_string()))
}

/// Parses `lo:hi,lo:hi,...`.
pub fn parse_box(s: &str) -> Result<Vec<(f64, f64)>, ParseError> {
    s.split(',')
        .map(|part| {
            let (lo, hi) = part
                .split_once(':')
                .ok_or_else(|| perr(format!("box interval `{part}` is not lo:hi")))?;
            let num = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| perr(format!("box bound `{t}` is not a number")))
            };
            let (lo, hi) = (num(lo)?, num(hi)?);
            if !(lo <= hi) {
                return Err(perr(format!("box interval `{part}` is empty")));
            }
            Ok((lo, hi))
        })
        .collect()
}

fn parse_list(label: &str, items: &[String], ring: &Arc<Ring>) -> Result<Vec<Polynomial>, ParseError> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| parse_polynomial(s, ring).map_err(|e| perr(format!("{label}[{i}] `{s}`: {e}"))))
        .collect()
}

impl ProblemSpec {
    pub fn resolve(file: &ProblemFile, opts: &RunOptions) -> Result<Self, ParseError> {
        let vars = &file.variables;
        if vars.is_empty() {
            return Err(perr("`variables` is empty"));
        }
        for (i, v) in vars.iter().enumerate() {
            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(perr(format!("variable `{v}` is not an identifier")));
            }
            if vars[..i].contains(v) {
                return Err(perr(format!("variable `{v}` is listed twice")));
            }
        }
        let ring = Ring::new(vars);
        let h = parse_list("h", &file.h, &ring)?;
        let g = parse_polynomial(&file.g, &ring).map_err(|e| perr(format!("g `{}`: {e}", file.g)))?;
        let mode = opts.mode.unwrap_or(file.mode);
        let dim_m = vars.len().checked_sub(h.len()).filter(|&d| d > 0).ok_or_else(|| {
            perr(format!("{} equations h in {} variables leave no manifold", h.len(), vars.len()))
        })?;

        let map = if mode.wants_matrix(file) {
            let rows = file
                .matrix
                .as_ref()
                .ok_or_else(|| perr(format!("mode {mode:?} needs `matrix`")))?;
            let cols = rows.first().map_or(0, Vec::len);
            if cols == 0 || rows.iter().any(|r| r.len() != cols) {
                return Err(perr("`matrix` must be a non-empty rectangular array"));
            }
            if rows.len() <= cols {
                return Err(perr(format!(
                    "`matrix` is {}x{}; rows must exceed columns",
                    rows.len(),
                    cols
                )));
            }
            if rows.len() - cols + 1 != dim_m {
                return Err(perr(format!(
                    "a {}x{} matrix needs a manifold of dimension {}, got {}",
                    rows.len(),
                    cols,
                    rows.len() - cols + 1,
                    dim_m
                )));
            }
            let flat: Vec<String> = rows.iter().flatten().cloned().collect();
            let entries = parse_list("matrix", &flat, &ring)?;
            MapSpec::Matrix(PolyMatrix::new(&ring, rows.len(), cols, entries).map_err(|e| perr(e.to_string()))?)
        } else {
            let f = file.f.as_ref().ok_or_else(|| perr(format!("mode {mode:?} needs `f`")))?;
            if f.len() != 2 * dim_m - 1 {
                return Err(perr(format!(
                    "a {dim_m}-manifold maps to R^{}, but `f` has {} components",
                    2 * dim_m - 1,
                    f.len()
                )));
            }
            match mode {
                Mode::CrosscapParity if dim_m % 2 != 0 => {
                    return Err(perr(format!("crosscap-parity needs even m, got {dim_m}")))
                }
                Mode::CrosscapSum if dim_m % 2 != 1 => {
                    return Err(perr(format!("crosscap-sum needs odd m, got {dim_m}")))
                }
                _ => {}
            }
            MapSpec::F(parse_list("f", f, &ring)?)
        };
        if let (Mode::IntersectSigned, MapSpec::Matrix(a)) = (mode, &map) {
            if (a.rows() - a.cols()) % 2 != 0 {
                return Err(perr("intersect-signed needs rows - columns even"));
            }
        }

        let defaults = OracleConfig::default();
        let seed = opts.seed.unwrap_or(file.seed);
        let bounds = opts.bounds.clone().or_else(|| file.numeric.bounds.clone());
        if let Some(b) = &bounds {
            if b.len() != dim_m + h.len() || b.iter().any(|(lo, hi)| !(lo <= hi)) {
                return Err(perr(format!("box needs {} non-empty intervals", vars.len())));
            }
        }
        let oracle = OracleConfig {
            seeds: opts.seeds.or(file.numeric.seeds).unwrap_or(defaults.seeds),
            bounds,
            newton_tol: file.numeric.newton_tol.unwrap_or(defaults.newton_tol),
            max_iters: file.numeric.max_iters.unwrap_or(defaults.max_iters),
            dedup_radius: file.numeric.dedup_radius.unwrap_or(defaults.dedup_radius),
            rng_seed: seed,
        };
        let order = opts.order.or(file.order).unwrap_or_default();
        let max_retries = opts.max_retries.or(file.max_retries).unwrap_or(DEFAULT_MAX_RETRIES);
        let echo = InputsEcho {
            variables: vars.clone(),
            h: file.h.clone(),
            g: file.g.clone(),
            matrix: matches!(map, MapSpec::Matrix(_)).then(|| file.matrix.clone()).flatten(),
            f: matches!(map, MapSpec::F(_)).then(|| file.f.clone()).flatten(),
            seed,
            order,
            max_retries,
            numeric: NumericEcho {
                seeds: oracle.seeds,
                bounds: oracle.bounds.clone(),
                newton_tol: oracle.newton_tol,
                max_iters: oracle.max_iters,
                dedup_radius: oracle.dedup_radius,
            },
        };
        Ok(ProblemSpec {
            name: file.name.clone(),
            ring,
            h,
            g,
            map,
            mode,
            seed,
            order,
            max_retries,
            oracle,
            echo,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    HypothesisFailed,
    OracleFailed,
    InternalError,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleStats {
    pub starts: usize,
    pub converged_starts: usize,
    pub closure_added: usize,
    pub stable_under_doubling: bool,
}

/// Intermediate quantities behind the reported value.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Provenance {
    pub dim: Option<usize>,
    pub sign_phi: Option<i8>,
    pub sign_psi: Option<i8>,
    pub functional_seed: Option<u64>,
    pub functional_retries: Option<usize>,
    pub algebraic_parity: Option<u8>,
    pub numeric_parity: Option<u8>,
    pub only_crosscaps: Option<OnlyCrossCaps>,
    pub singular_points: Option<Vec<SingularSummary>>,
    pub zeros: Option<Vec<ZeroPoint>>,
    pub oracle: Option<OracleStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub name: Option<String>,
    pub mode: Mode,
    pub status: Status,
    pub exit_code: i32,
    pub inputs: InputsEcho,
    pub assumptions: Option<AssumptionReport>,
    pub value: Option<i64>,
    pub provenance: Provenance,
    pub warnings: Vec<String>,
    pub diagnostic: Option<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Outcome of one invocation: a report unless the input failed to parse.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: Option<Report>,
    pub diagnostic: Option<String>,
}

pub fn run_file(path: &Path, opts: &RunOptions) -> Outcome {
    match read_problem_file(path) {
        Ok(file) => run_problem(&file, opts),
        Err(e) => parse_failure(e),
    }
}

fn parse_failure(e: ParseError) -> Outcome {
    Outcome {
        exit_code: EXIT_PARSE,
        report: None,
        diagnostic: Some(format!("parse error: {}", e.0)),
    }
}

pub fn run_problem(file: &ProblemFile, opts: &RunOptions) -> Outcome {
    let spec = match ProblemSpec::resolve(file, opts) {
        Ok(s) => s,
        Err(e) => return parse_failure(e),
    };
    let report = run(&spec);
    Outcome {
        exit_code: report.exit_code,
        diagnostic: report.diagnostic.clone(),
        report: Some(report),
    }
}

struct Failure {
    status: Status,
    message: String,
}

impl Failure {
    fn code(&self) -> i32 {
        match self.status {
            Status::Ok => EXIT_OK,
            Status::HypothesisFailed => EXIT_HYPOTHESIS,
            Status::OracleFailed => EXIT_ORACLE,
            Status::InternalError => EXIT_INTERNAL,
        }
    }
}

impl From<IntersectError> for Failure {
    fn from(e: IntersectError) -> Self {
        let status = match e {
            IntersectError::HypothesisFailed(_) => Status::HypothesisFailed,
            _ => Status::InternalError,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

impl From<NumericError> for Failure {
    fn from(e: NumericError) -> Self {
        Failure {
            status: Status::OracleFailed,
            message: e.to_string(),
        }
    }
}

impl From<CrossCapError> for Failure {
    fn from(e: CrossCapError) -> Self {
        match e {
            CrossCapError::Intersect(inner) => inner.into(),
            CrossCapError::Numeric(inner) => inner.into(),
            CrossCapError::NotOnlyCrossCaps(_) => Failure {
                status: Status::HypothesisFailed,
                message: e.to_string(),
            },
            CrossCapError::ParityMismatch { .. } => Failure {
                status: Status::OracleFailed,
                message: e.to_string(),
            },
            other => Failure {
                status: Status::InternalError,
                message: other.to_string(),
            },
        }
    }
}

struct Draft {
    assumptions: Option<AssumptionReport>,
    value: Option<i64>,
    provenance: Provenance,
    warnings: Vec<String>,
}

impl Draft {
    fn new() -> Self {
        Draft {
            assumptions: None,
            value: None,
            provenance: Provenance::default(),
            warnings: Vec::new(),
        }
    }
}

/// Dispatches on the mode. Never panics on mathematical failures; they become
/// a status and exit code in the report.
pub fn run(spec: &ProblemSpec) -> Report {
    let mut draft = Draft::new();
    let result = match (&spec.map, spec.mode) {
        (MapSpec::Matrix(a), Mode::IntersectMod2) => intersect_mod2(spec, a, &mut draft),
        (MapSpec::Matrix(a), Mode::IntersectSigned) => intersect_signed(spec, a, &mut draft),
        (MapSpec::Matrix(a), Mode::Oracle) => oracle(spec, &spec.h, a, &mut draft),
        (MapSpec::F(f), mode) => crosscap_problem(spec, f)
            .map_err(Failure::from)
            .and_then(|p| match mode {
                Mode::Verify => verify(spec, &p, &mut draft),
                Mode::CrosscapParity => parity(spec, &p, &mut draft),
                Mode::Oracle => oracle(spec, &p.h, &build_dhf(&p), &mut draft),
                _ => sum(spec, &p, &mut draft),
            }),
        _ => unreachable!("resolve pairs modes with map kinds"),
    };
    let (status, exit_code, diagnostic) = match result {
        Ok(()) => (Status::Ok, EXIT_OK, None),
        Err(f) => (f.status, f.code(), Some(f.message)),
    };
    Report {
        name: spec.name.clone(),
        mode: spec.mode,
        status,
        exit_code,
        inputs: spec.echo.clone(),
        assumptions: draft.assumptions,
        value: draft.value,
        provenance: draft.provenance,
        warnings: draft.warnings,
        diagnostic,
    }
}

fn crosscap_problem(spec: &ProblemSpec, f: &[Polynomial]) -> Result<CrossCapProblem, CrossCapError> {
    CrossCapProblem::new(spec.h.clone(), spec.g.clone(), f.to_vec())
}

fn intersect_mod2(spec: &ProblemSpec, a: &PolyMatrix, d: &mut Draft) -> Result<(), Failure> {
    let prep = check_assumptions(&spec.h, &spec.g, a, spec.order.into())?;
    d.assumptions = Some(prep.report.clone());
    d.provenance.dim = prep.report.dim;
    let r = evaluate_prepared(&prep, None, spec.seed, spec.max_retries)?;
    d.provenance.sign_phi = Some(r.sign_phi);
    d.provenance.sign_psi = Some(r.sign_psi);
    d.provenance.functional_seed = Some(r.functional_seed);
    d.provenance.functional_retries = Some(r.retries);
    d.provenance.algebraic_parity = Some(r.parity);
    d.value = Some(i64::from(r.parity));
    Ok(())
}

fn solve_with_stats(
    system: &OracleSystem,
    cfg: &OracleConfig,
    d: &mut Draft,
) -> Result<ZeroSet, Failure> {
    let set = match solve_zeros(system, cfg) {
        Ok(s) => s,
        Err(NumericError::NoConvergence) => ZeroSet::default(),
        Err(e) => return Err(e.into()),
    };
    let stable = stable_under_doubling(system, cfg, &set)?;
    if !stable {
        d.warnings
            .push("doubling the Newton starts changed the zero set; the count may be incomplete".into());
    }
    d.provenance.oracle = Some(OracleStats {
        starts: cfg.seeds,
        converged_starts: set.converged_starts,
        closure_added: set.closure_added,
        stable_under_doubling: stable,
    });
    Ok(set)
}

fn intersect_signed(spec: &ProblemSpec, a: &PolyMatrix, d: &mut Draft) -> Result<(), Failure> {
    let prep = check_assumptions(&spec.h, &spec.g, a, spec.order.into())?;
    d.assumptions = Some(prep.report.clone());
    d.provenance.dim = prep.report.dim;
    if !prep.report.j_plus_g_trivial {
        return Err(IntersectError::HypothesisFailed(prep.report.clone()).into());
    }
    let system = OracleSystem::from_matrix_map(&spec.h, &spec.g, a).map_err(NumericError::from)?;
    solve_with_stats(&system, &spec.oracle, d)?;
    let zeros = interior_zeros(&system, &spec.oracle)?;
    let signed = signed_half_sum(&zeros.zeros, spec.oracle.dedup_radius)?;
    d.provenance.numeric_parity = Some(signed.rem_euclid(2) as u8);
    d.provenance.zeros = Some(zeros.zeros);
    d.value = Some(signed);
    if prep.report.all_hold() {
        let r = evaluate_prepared(&prep, None, spec.seed, spec.max_retries)?;
        d.provenance.sign_phi = Some(r.sign_phi);
        d.provenance.sign_psi = Some(r.sign_psi);
        d.provenance.functional_seed = Some(r.functional_seed);
        d.provenance.functional_retries = Some(r.retries);
        d.provenance.algebraic_parity = Some(r.parity);
        if r.parity != signed.rem_euclid(2) as u8 {
            return Err(Failure {
                status: Status::OracleFailed,
                message: format!("numeric signed count {signed} disagrees with exact parity {}", r.parity),
            });
        }
    } else {
        d.warnings.push(format!("exact parity cross-check skipped: {}", prep.report));
    }
    Ok(())
}

fn oracle(spec: &ProblemSpec, h: &[Polynomial], a: &PolyMatrix, d: &mut Draft) -> Result<(), Failure> {
    let system = OracleSystem::from_matrix_map(h, &spec.g, a).map_err(NumericError::from)?;
    solve_with_stats(&system, &spec.oracle, d)?;
    let zeros = interior_zeros(&system, &spec.oracle)?;
    let parity = ((zeros.zeros.len() / 2) % 2) as u8;
    d.provenance.numeric_parity = Some(parity);
    d.provenance.zeros = Some(zeros.zeros);
    d.value = Some(i64::from(parity));
    Ok(())
}

fn verify(spec: &ProblemSpec, p: &CrossCapProblem, d: &mut Draft) -> Result<(), Failure> {
    let (status, census) = verify_only_crosscaps(p, &spec.oracle)?;
    d.provenance.only_crosscaps = Some(status);
    d.provenance.singular_points = Some(census);
    Ok(())
}

fn parity(spec: &ProblemSpec, p: &CrossCapProblem, d: &mut Draft) -> Result<(), Failure> {
    verify(spec, p, d)?;
    if d.provenance.only_crosscaps == Some(OnlyCrossCaps::NotOnlyCrosscaps) {
        d.warnings.push(
            "f|M has singular points other than cross-caps; the parity is the one shared by nearby maps with only cross-caps"
                .into(),
        );
    }
    let dhf = build_dhf(p);
    let prep = check_assumptions(&p.h, &p.g, &dhf, spec.order.into())?;
    d.assumptions = Some(prep.report.clone());
    d.provenance.dim = prep.report.dim;
    let r = crosscap_parity_with(p, spec.seed, spec.order.into(), spec.max_retries)?;
    d.provenance.sign_phi = Some(r.sign_phi);
    d.provenance.sign_psi = Some(r.sign_psi);
    d.provenance.functional_seed = Some(r.functional_seed);
    d.provenance.functional_retries = Some(r.retries);
    d.provenance.algebraic_parity = Some(r.parity);
    d.value = Some(i64::from(r.parity));
    Ok(())
}

fn sum(spec: &ProblemSpec, p: &CrossCapProblem, d: &mut Draft) -> Result<(), Failure> {
    let dhf = build_dhf(p);
    let system = OracleSystem::from_matrix_map(&p.h, &p.g, &dhf).map_err(NumericError::from)?;
    let set = solve_with_stats(&system, &spec.oracle, d)?;
    d.provenance.zeros = Some(set.zeros.into_iter().filter(|z| z.g_value > 0.0).collect());
    let report = analyze(p, &spec.oracle, spec.seed, spec.order.into(), spec.max_retries);
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            if let CrossCapError::NotOnlyCrossCaps(status) = &e {
                d.provenance.only_crosscaps = Some(*status);
            }
            return Err(e.into());
        }
    };
    d.provenance.only_crosscaps = Some(report.only_crosscaps);
    d.provenance.singular_points = Some(report.zero_census);
    d.provenance.numeric_parity = Some(report.value.rem_euclid(2) as u8);
    match report.algebraic {
        Some(r) => {
            d.provenance.dim = Some(r.dim);
            d.provenance.sign_phi = Some(r.sign_phi);
            d.provenance.sign_psi = Some(r.sign_psi);
            d.provenance.functional_seed = Some(r.functional_seed);
            d.provenance.functional_retries = Some(r.retries);
            d.provenance.algebraic_parity = Some(r.parity);
        }
        None => d
            .warnings
            .push("exact parity cross-check skipped: its hypotheses fail for d(h,f)".into()),
    }
    d.value = Some(report.value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPHERE: &str = r#"
variables = ["x", "y", "z"]
h = ["x^2+y^2+z^2-1"]
g = "z"
mode = "intersect-mod2"
matrix = [["x", "0"], ["y", "1"], ["z", "0"]]
"#;

    #[test]
    fn box_syntax() {
        assert_eq!(parse_box("-1:1, 0:2.5").unwrap(), vec![(-1.0, 1.0), (0.0, 2.5)]);
        assert!(parse_box("1:-1").is_err());
        assert!(parse_box("1").is_err());
    }

    #[test]
    fn malformed_polynomial_is_a_parse_error_with_position() {
        let text = SPHERE.replace("\"x\", \"0\"", "\"x+*y\", \"0\"");
        let out = run_problem(&parse_problem_text(&text).unwrap(), &RunOptions::default());
        assert_eq!(out.exit_code, EXIT_PARSE);
        assert!(out.report.is_none());
        assert!(out.diagnostic.unwrap().contains("position"));
    }

    #[test]
    fn shape_violations_are_parse_errors() {
        let wide = SPHERE.replace(r#"[["x", "0"], ["y", "1"], ["z", "0"]]"#, r#"[["x", "y", "z"]]"#);
        let out = run_problem(&parse_problem_text(&wide).unwrap(), &RunOptions::default());
        assert_eq!(out.exit_code, EXIT_PARSE);
        let missing = SPHERE.replace("mode = \"intersect-mod2\"", "mode = \"verify\"");
        let out = run_problem(&parse_problem_text(&missing).unwrap(), &RunOptions::default());
        assert_eq!(out.exit_code, EXIT_PARSE);
        assert!(parse_problem_text("variables = [\"x\"]\nmode = \"bogus\"").is_err());
    }

    #[test]
    fn column_map_on_half_sphere() {
        // a = [x 0; y 1; z 0] drops rank exactly where x = z = 0: the two
        // points (0, ±1, 0) lie on the boundary z = 0, so the boundary
        // hypothesis must fail
        let out = run_problem(&parse_problem_text(SPHERE).unwrap(), &RunOptions::default());
        assert_eq!(out.exit_code, EXIT_HYPOTHESIS);
        let report = out.report.unwrap();
        assert_eq!(report.status, Status::HypothesisFailed);
        assert!(!report.assumptions.unwrap().j_plus_g_trivial);
    }

    #[test]
    fn overrides_win_over_file() {
        let file = parse_problem_text(SPHERE).unwrap();
        let opts = RunOptions {
            seed: Some(9),
            seeds: Some(10),
            order: Some(OrderName::Lex),
            ..RunOptions::default()
        };
        let spec = ProblemSpec::resolve(&file, &opts).unwrap();
        assert_eq!((spec.seed, spec.oracle.seeds, spec.oracle.rng_seed), (9, 10, 9));
        assert_eq!(spec.order, OrderName::Lex);
    }
}
