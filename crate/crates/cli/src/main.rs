//! `randlab`: algorithmic randomness, quantum information and free probability from the command line.

mod classic;
mod output;
mod quantum;
mod spectral;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use randlab_core::acceptance::{run_criteria, AcceptanceOptions, MODULES};
use randlab_core::report::{Check, Report};
use serde_json::json;

use output::{emit, Emitted, ReportArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(randlab_core::Error),
}

impl From<randlab_core::Error> for CliError {
    fn from(e: randlab_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage: {s}"),
            CliError::Io(s) => write!(f, "io: {s}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "randlab", version, about = "Executable randomness, quantum information and free probability")]
struct Cli {
    /// Seed for every stochastic operation.
    #[arg(long, global = true, env = "RW_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the certified test battery on a bit file.
    Randtest(classic::RandtestArgs),
    /// Generate output from a classical pseudo-random generator.
    Prg(classic::PrgArgs),
    /// Play a gambling strategy against a bit sequence.
    Gamble(classic::GambleArgs),
    /// Entropy rate estimates for a Bernoulli or Markov shift.
    ShiftEntropy(classic::ShiftArgs),
    /// Prefix codes, entropies, typical sets and the Ω lower bound.
    Coding(classic::CodingArgs),
    /// Density operators, distances, entropies, Holevo quantities and the Bell table.
    Qinfo(quantum::QinfoArgs),
    /// The quantum casino.
    Casino(quantum::CasinoArgs),
    /// Free probability: moments, walks, Fock space and Wigner matrices.
    Freeprob(spectral::FreeprobArgs),
    /// Run the acceptance suite.
    Selftest(SelftestArgs),
}

#[derive(clap::Args, Debug)]
struct SelftestArgs {
    /// Only run the criteria of this module.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(MODULES))]
    only: Option<String>,
    /// Tolerance for the Bloch trace-distance law.
    #[arg(long, default_value_t = 1e-9)]
    bloch_tolerance: f64,
    #[command(flatten)]
    report: ReportArgs,
}

fn selftest(a: &SelftestArgs, seed: u64) -> CliResult<Emitted> {
    let opts = AcceptanceOptions { seed, bloch_tolerance: a.bloch_tolerance };
    let results = run_criteria(&opts, a.only.as_deref());
    for r in &results {
        eprintln!("{r}");
    }
    let checks = results
        .iter()
        .map(|r| Check::with(format!("criterion {} ({})", r.id, r.title), r.passed, "pass", if r.passed { "pass" } else { "fail" }))
        .collect();
    let report = Report::new("selftest", json!({"only": a.only, "bloch_tolerance": a.bloch_tolerance}), json!({"criteria": results}))
        .with_seed(seed)
        .with_checks(checks);
    let mut table = output::Table::new(["criterion", "module", "title", "passed", "elapsed_ms", "budget_ms"]);
    for r in &results {
        table.push([r.id.to_string(), r.module.clone(), r.title.clone(), r.passed.to_string(), format!("{:.3}", r.elapsed_ms), format!("{:.0}", r.budget_ms)]);
    }
    Ok(Emitted { report, table: Some(table) })
}

fn run(cli: Cli) -> CliResult<bool> {
    let seed = cli.seed;
    match &cli.command {
        Command::Randtest(a) => emit(classic::randtest(a)?, &a.report_args()),
        Command::Prg(a) => emit(classic::prg(a, seed)?, &a.report),
        Command::Gamble(a) => emit(classic::gamble(a, seed)?, &a.report),
        Command::ShiftEntropy(a) => emit(classic::shift_entropy(a, seed)?, &a.report),
        Command::Coding(a) => emit(classic::coding(a)?, &a.report),
        Command::Qinfo(a) => emit(quantum::qinfo(a)?, &a.report),
        Command::Casino(a) => emit(quantum::casino(a, seed)?, &a.report),
        Command::Freeprob(a) => emit(spectral::freeprob(a, seed)?, &a.report),
        Command::Selftest(a) => emit(selftest(a, seed)?, &a.report),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Core(randlab_core::Error::Certification { .. }) => 1,
                _ => 2,
            })
        }
    }
}
