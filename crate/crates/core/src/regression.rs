//! The checked-in problem corpus, run through the same path as the CLI.
//!
//! Every file under `problems/` with an `[expect]` table is a case. A case
//! passes when the run exits 0 and the value, algebra dimension and
//! only-cross-caps status match. Cases with an exact parity are also run in
//! oracle mode, and the two engines must agree whenever the oracle applies.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::cli::{
    read_problem_file, run_problem, Expectation, Mode, ParseError, ProblemFile, Report, RunOptions, EXIT_OK,
};
use crate::crosscap::OnlyCrossCaps;

#[derive(Debug, Clone)]
pub struct CorpusCase {
    pub name: String,
    pub path: PathBuf,
    pub file: ProblemFile,
    pub expect: Expectation,
}

/// Directory holding the checked-in problem files.
pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("problems")
}

/// All cases in `dir`, sorted by name.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusCase>, ParseError> {
    let entries = std::fs::read_dir(dir).map_err(|e| ParseError(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    let mut cases = Vec::new();
    for path in paths {
        let file = read_problem_file(&path)?;
        let Some(expect) = file.expect.clone() else { continue };
        let name = file
            .name
            .clone()
            .unwrap_or_else(|| path.file_stem().unwrap_or_default().to_string_lossy().into_owned());
        cases.push(CorpusCase {
            name,
            path,
            file,
            expect,
        });
    }
    Ok(cases)
}

/// How the numeric engine compared with the exact parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrossEngine {
    Agree,
    Disagree { exact: u8, numeric: i64 },
    /// The map is not transverse, so the oracle has nothing to count.
    NotApplicable(String),
    /// The case carries no exact parity.
    NoExactParity,
}

#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub name: String,
    pub passed: bool,
    pub mismatches: Vec<String>,
    pub cross_engine: CrossEngine,
    pub report: Option<Report>,
}

impl fmt::Display for CaseOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}", self.name)?;
        if let Some(r) = &self.report {
            write!(f, " value={:?} dim={:?}", r.value, r.provenance.dim)?;
        }
        write!(f, " cross-engine={:?}", self.cross_engine)?;
        for m in &self.mismatches {
            write!(f, "; {m}")?;
        }
        Ok(())
    }
}

fn check(expect: &Expectation, report: &Report, exit_code: i32) -> Vec<String> {
    let mut out = Vec::new();
    if exit_code != EXIT_OK {
        out.push(format!(
            "exit code {exit_code}: {}",
            report.diagnostic.as_deref().unwrap_or("")
        ));
    }
    if let Some(v) = expect.value {
        match report.value {
            Some(got) if (got - v).abs() <= expect.tolerance => {}
            got => out.push(format!("value {got:?}, expected {v}")),
        }
    }
    if expect.dim.is_some() && report.provenance.dim != expect.dim {
        out.push(format!("dim {:?}, expected {:?}", report.provenance.dim, expect.dim));
    }
    if expect.only_crosscaps.is_some() && report.provenance.only_crosscaps != expect.only_crosscaps {
        out.push(format!(
            "only-cross-caps {:?}, expected {:?}",
            report.provenance.only_crosscaps, expect.only_crosscaps
        ));
    }
    out
}

fn cross_engine(case: &CorpusCase, opts: &RunOptions, report: &Report) -> CrossEngine {
    let Some(exact) = report.provenance.algebraic_parity else {
        return CrossEngine::NoExactParity;
    };
    let oracle_opts = RunOptions {
        mode: Some(Mode::Oracle),
        ..opts.clone()
    };
    let out = run_problem(&case.file, &oracle_opts);
    let numeric = out.report.as_ref().and_then(|r| r.value);
    match numeric {
        Some(n) if out.exit_code == EXIT_OK => {
            if n.rem_euclid(2) == i64::from(exact) {
                CrossEngine::Agree
            } else {
                CrossEngine::Disagree { exact, numeric: n }
            }
        }
        _ if report.provenance.only_crosscaps == Some(OnlyCrossCaps::NotOnlyCrosscaps) => {
            CrossEngine::NotApplicable(out.diagnostic.unwrap_or_default())
        }
        _ => CrossEngine::Disagree {
            exact,
            numeric: numeric.unwrap_or(-1),
        },
    }
}

pub fn run_case(case: &CorpusCase, opts: &RunOptions) -> CaseOutcome {
    let out = run_problem(&case.file, opts);
    let Some(report) = out.report else {
        return CaseOutcome {
            name: case.name.clone(),
            passed: false,
            mismatches: vec![out.diagnostic.unwrap_or_default()],
            cross_engine: CrossEngine::NoExactParity,
            report: None,
        };
    };
    let mismatches = check(&case.expect, &report, out.exit_code);
    let cross = cross_engine(case, opts, &report);
    CaseOutcome {
        name: case.name.clone(),
        passed: mismatches.is_empty() && !matches!(cross, CrossEngine::Disagree { .. }),
        mismatches,
        cross_engine: cross,
        report: Some(report),
    }
}

#[derive(Debug, Clone)]
pub struct CorpusSummary {
    pub outcomes: Vec<CaseOutcome>,
}

impl CorpusSummary {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

impl fmt::Display for CorpusSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            writeln!(f, "{o}")?;
        }
        let passed = self.outcomes.iter().filter(|o| o.passed).count();
        write!(f, "{passed}/{} corpus cases passed", self.outcomes.len())
    }
}

/// Runs every case of the checked-in corpus.
pub fn run_corpus() -> Result<CorpusSummary, ParseError> {
    run_corpus_in(&corpus_dir(), &RunOptions::default(), |_| true)
}

/// Runs the cases in `dir` accepted by `filter`, with `opts` applied to each.
pub fn run_corpus_in(
    dir: &Path,
    opts: &RunOptions,
    filter: impl Fn(&CorpusCase) -> bool,
) -> Result<CorpusSummary, ParseError> {
    let outcomes = load_corpus(dir)?
        .iter()
        .filter(|c| filter(c))
        .map(|c| run_case(c, opts))
        .collect();
    Ok(CorpusSummary { outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_loads_and_every_case_has_an_origin() {
        let cases = load_corpus(&corpus_dir()).unwrap();
        assert!(cases.len() >= 10);
        for c in &cases {
            assert!(
                ["reference", "derived", "trivial"].contains(&c.expect.origin.as_str()),
                "{}",
                c.name
            );
        }
    }
}
