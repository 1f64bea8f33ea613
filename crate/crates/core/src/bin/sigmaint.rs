use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sigmaint::cli::{parse_box, run_file, Mode, OrderName, RunOptions, EXIT_PARSE};

/// Intersection numbers with the positive-corank stratum and cross-cap counts
/// for polynomial maps. Writes a JSON report to standard output.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    /// Problem file (TOML).
    problem: PathBuf,
    /// Override the file's mode.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Seed for the linear functional and the Newton starts.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of Newton starts.
    #[arg(long)]
    seeds: Option<usize>,
    /// Sampling box, `lo:hi,lo:hi,...` (one interval per variable).
    #[arg(long = "box", allow_hyphen_values = true)]
    bounds: Option<String>,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    order: Option<OrderName>,
    /// Functionals to try before giving up on a singular [Psi].
    #[arg(long)]
    max_retries: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let bounds = match args.bounds.as_deref().map(parse_box).transpose() {
        Ok(b) => b,
        Err(e) => {
            eprintln!("parse error: {e}");
            return ExitCode::from(EXIT_PARSE as u8);
        }
    };
    let opts = RunOptions {
        mode: args.mode,
        seed: args.seed,
        seeds: args.seeds,
        bounds,
        order: args.order,
        max_retries: args.max_retries,
    };
    let outcome = run_file(&args.problem, &opts);
    if let Some(report) = &outcome.report {
        let json = report.to_json();
        print!("{json}");
        if let Some(path) = &args.out {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
    }
    if let Some(d) = &outcome.diagnostic {
        eprintln!("{d}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
