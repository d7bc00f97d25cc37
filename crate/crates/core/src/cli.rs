//! Command-line front end. Every command returns an [`Outcome`] instead of
//! printing, so the binary stays a thin wrapper and tests can drive the same
//! code paths.
//!
//! Exit codes: 0 success, 1 malformed input, 2 mathematical validation failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use crate::delzant::{build_model, check_assumptions, ModelError};
use crate::invariant::{Evaluator, InvariantReport, LoopSpec};
use crate::linalg::{format_rational, parse_rational, Rational};
use crate::oracles::{self, BlowupParams};
use crate::report::{ManifoldSpecFile, ReportFile};
use crate::selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "toric-ham",
    version,
    about = "Exact characteristic numbers of circle actions on toric manifolds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the moment polytope from a JSON spec and compute invariants.
    Compute {
        file: PathBuf,
        /// Coordinate loop e_a (1-based); repeatable.
        #[arg(long = "loop-index", value_name = "a")]
        loop_index: Vec<usize>,
        /// General loop with weights c1,...,cm; repeatable.
        #[arg(
            long = "loop-weights",
            value_name = "c1,...,cm",
            allow_hyphen_values = true
        )]
        loop_weights: Vec<String>,
        /// Every coordinate loop, in addition to any listed ones.
        #[arg(long)]
        all: bool,
        /// Also write the report as JSON.
        #[arg(long, value_name = "out")]
        json: Option<PathBuf>,
    },
    /// Run the oracle grid and property suites.
    Selftest,
    /// Print closed-form reference values.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// One-point blow-up of CP³.
    #[command(name = "blowup-cp3")]
    BlowupCp3 {
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        tau: Rational,
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        mu: Rational,
    },
    /// Complex projective space CPⁿ.
    Cpn {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        tau: Rational,
    },
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|_| format!("{s:?} is not a rational p/q"))
}

#[derive(Debug, Clone, Default)]
pub struct ComputeOptions {
    /// 1-based coordinate indices.
    pub loop_indices: Vec<usize>,
    /// Comma-separated integer weight lists.
    pub loop_weights: Vec<String>,
    pub all: bool,
    pub json_out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and dispatches.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(EXIT_MALFORMED, text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    match cli.command {
        Command::Compute {
            file,
            loop_index,
            loop_weights,
            all,
            json,
        } => run_compute(
            &file,
            &ComputeOptions {
                loop_indices: loop_index,
                loop_weights,
                all,
                json_out: json,
            },
        ),
        Command::Selftest => run_selftest(),
        Command::Oracle(OracleCommand::BlowupCp3 { tau, mu }) => run_oracle_blowup(tau, mu),
        Command::Oracle(OracleCommand::Cpn { n, tau }) => run_oracle_cpn(n, tau),
    }
}

fn parse_weights(text: &str, m: usize) -> Result<LoopSpec, String> {
    let weights = text
        .split(',')
        .map(|t| t.trim().parse::<BigInt>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| format!("--loop-weights {text:?}: expected comma-separated integers"))?;
    if weights.len() != m {
        return Err(format!(
            "--loop-weights {text:?}: has {} weights, expected m = {m}",
            weights.len()
        ));
    }
    Ok(LoopSpec::new(weights))
}

fn select_loops(
    opts: &ComputeOptions,
    file_loops: &[LoopSpec],
    m: usize,
) -> Result<Vec<LoopSpec>, String> {
    let mut loops = Vec::new();
    for &a in &opts.loop_indices {
        if a == 0 || a > m {
            return Err(format!("--loop-index {a}: must be between 1 and m = {m}"));
        }
        loops.push(LoopSpec::coordinate(a - 1, m));
    }
    for text in &opts.loop_weights {
        loops.push(parse_weights(text, m)?);
    }
    if opts.all {
        loops.extend((0..m).map(|a| LoopSpec::coordinate(a, m)));
    }
    if loops.is_empty() {
        if file_loops.is_empty() {
            loops.extend((0..m).map(|a| LoopSpec::coordinate(a, m)));
        } else {
            loops.extend(file_loops.iter().cloned());
        }
    }
    Ok(loops)
}

fn model_error_code(e: &ModelError) -> i32 {
    match e {
        ModelError::Shape(_) => EXIT_MALFORMED,
        _ => EXIT_INVALID,
    }
}

pub fn run_compute(path: &Path, opts: &ComputeOptions) -> Outcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            return Outcome::fail(
                EXIT_MALFORMED,
                format!("error: cannot read {}: {e}\n", path.display()),
            )
        }
    };
    let spec = match ManifoldSpecFile::from_json(&text).and_then(|f| f.validate()) {
        Ok(s) => s,
        Err(e) => {
            return Outcome::fail(EXIT_MALFORMED, format!("error: {}: {e}\n", path.display()))
        }
    };
    let m = spec.weights.cols();
    let loops = match select_loops(opts, &spec.loops, m) {
        Ok(l) => l,
        Err(e) => return Outcome::fail(EXIT_MALFORMED, format!("error: {e}\n")),
    };
    let assumptions = check_assumptions(&spec.weights);
    let model = match build_model(&spec.weights, &spec.tau) {
        Ok(model) => model,
        Err(e) => {
            let msg = format!("validation failed for {}: {e}\n", spec.name);
            return Outcome::fail(model_error_code(&e), msg);
        }
    };
    let evaluator = match Evaluator::new(&model) {
        Ok(ev) => ev,
        Err(e) => return Outcome::fail(EXIT_INVALID, format!("validation failed: {e}\n")),
    };
    let reports: Vec<InvariantReport> =
        match loops.iter().map(|l| evaluator.loop_report(l)).collect() {
            Ok(r) => r,
            Err(e) => return Outcome::fail(EXIT_MALFORMED, format!("error: {e}\n")),
        };
    let report = ReportFile::build(&spec.name, &assumptions, &model, &evaluator, &reports);
    let mut stdout = report.to_text();
    if let Some(out) = &opts.json_out {
        if let Err(e) = std::fs::write(out, report.to_json()) {
            return Outcome::fail(
                EXIT_MALFORMED,
                format!("error: cannot write {}: {e}\n", out.display()),
            );
        }
        let _ = writeln!(stdout, "report written to {}", out.display());
    }
    Outcome::ok(stdout)
}

pub fn run_selftest() -> Outcome {
    let outcomes = selftest::run_all();
    let mut stdout = String::new();
    let mut stderr = String::new();
    for o in &outcomes {
        match &o.result {
            Ok(checks) => {
                let _ = writeln!(
                    stdout,
                    "PASS {} ({checks} checks, {:.2?})",
                    o.name, o.elapsed
                );
            }
            Err(counterexample) => {
                let _ = writeln!(stdout, "FAIL {} ({:.2?})", o.name, o.elapsed);
                let _ = writeln!(stderr, "{}: {counterexample}", o.name);
            }
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    let _ = writeln!(
        stdout,
        "{} of {} suites passed",
        outcomes.len() - failed,
        outcomes.len()
    );
    Outcome {
        code: if failed == 0 { EXIT_OK } else { EXIT_INVALID },
        stdout,
        stderr,
    }
}

fn join(v: &[Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

pub fn run_oracle_blowup(tau: Rational, mu: Rational) -> Outcome {
    let table = match BlowupParams::new(tau, mu)
        .map_err(|e| e.to_string())
        .and_then(|p| oracles::blowup_table(&p).map_err(|e| e.to_string()))
    {
        Ok(t) => t,
        Err(e) => return Outcome::fail(EXIT_INVALID, format!("error: {e}\n")),
    };
    let p = &table.params;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "blow-up of CP^3: tau = {}, mu = {}, lambda = {}",
        format_rational(p.tau()),
        format_rational(p.mu()),
        format_rational(p.lambda())
    );
    for (label, kappa, total, facets) in [
        ("psi (e1)", &table.kappa, &table.i_psi, &table.facets_psi),
        (
            "psi~ (e3)",
            &table.kappa_tilde,
            &table.i_psi_tilde,
            &table.facets_psi_tilde,
        ),
        (
            "psi^ (e4)",
            &table.kappa_hat,
            &table.i_psi_hat,
            &table.facets_psi_hat,
        ),
    ] {
        let _ = writeln!(
            s,
            "{label}: kappa = {}, I = {}",
            format_rational(kappa),
            format_rational(total)
        );
        let _ = writeln!(s, "  facets: {}", join(facets));
    }
    Outcome::ok(s)
}

pub fn run_oracle_cpn(n: usize, tau: Rational) -> Outcome {
    if let Err(e) = oracles::cpn_model(n, &tau) {
        return Outcome::fail(EXIT_INVALID, format!("error: {e}\n"));
    }
    let kappa = oracles::cpn_kappa(n, &tau);
    let i = oracles::cpn_invariant(n, &tau, &kappa);
    Outcome::ok(format!(
        "CP^{n}: tau = {}, kappa = {}, I = {}\n",
        format_rational(&tau),
        format_rational(&kappa),
        format_rational(&i)
    ))
}
