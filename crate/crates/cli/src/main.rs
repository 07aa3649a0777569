//! `symplaw`: runs property suites and evaluates single expressions, reading and
//! writing JSON.

mod eval;
mod report;
mod suites;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] symplaw_core::Error),
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "symplaw", version, about = "Exact symplectic determinant laws, Pfaffians and pseudocharacters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named property suite and emit a JSON report.
    Suite {
        #[arg(value_enum)]
        name: SuiteName,
        #[command(flatten)]
        opts: SuiteOpts,
    },
    /// Evaluate one expression from a JSON input file.
    Eval {
        #[arg(value_enum)]
        what: EvalKind,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    Pfaffian,
    DetLaw,
    Invariants,
    Gma,
    Pseudochar,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EvalKind {
    Pfaffian,
    Detlaw,
    Invariant,
    Theta,
}

#[derive(clap::Args, Clone, Debug)]
pub struct SuiteOpts {
    /// Half-dimension: matrices are 2d × 2d.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Number of variables for the invariants suite.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Representation (det-law, pseudochar) or GMA spec (gma) as JSON.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn max_dim() -> CliResult<usize> {
    match std::env::var("SYMPLAW_MAX_DIM") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("SYMPLAW_MAX_DIM must be a positive integer, got `{v}`"))),
        Err(_) => Ok(12),
    }
}

pub fn check_dim(d: usize) -> CliResult<()> {
    let cap = max_dim()?;
    if d == 0 || 2 * d > cap {
        return Err(CliError::Input(format!("2d = {} must lie in 2..={cap} (SYMPLAW_MAX_DIM)", 2 * d)));
    }
    Ok(())
}

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_owned(), source })
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|source| CliError::Io { path: path.to_owned(), source }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Suite { name, opts } => {
            let report = suites::run_suite(name, &opts)?;
            let passed = report["passed"].as_bool().unwrap_or(false);
            let text = serde_json::to_string_pretty(&report).expect("reports serialize");
            emit(&text, opts.out.as_deref())?;
            Ok(passed)
        }
        Command::Eval { what, input, out } => {
            let value = eval::eval_file(what, &read_json(&input)?)?;
            emit(&value, out.as_deref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("symplaw: {e}");
            ExitCode::from(2)
        }
    }
}
