//! `graphsched` command-line front end.
//!
//! Structured documents go to stdout, diagnostics to stderr. Exit codes:
//! 0 success, 1 invalid input, 2 validation failed, 3 resource cap or budget
//! exceeded.

mod bench;
mod commands;
mod doc;
mod error;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::{Failure, EXIT_INVALID_INPUT};

#[derive(Parser)]
#[command(
    name = "graphsched",
    version,
    about = "Optimal measurement schedules for graph states"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Structured)]
    format: Format,
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Time budget for exact search, e.g. `10s`, `500ms`, or `none`.
    #[arg(long, global = true, default_value = "10s", value_parser = parse_budget)]
    budget: BudgetArg,
    /// Suppress diagnostics on stderr (errors are still reported).
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy)]
struct BudgetArg(Option<Duration>);

fn parse_budget(s: &str) -> Result<BudgetArg, String> {
    match s {
        "none" | "unlimited" => Ok(BudgetArg(None)),
        _ => humantime::parse_duration(s)
            .map(|d| BudgetArg(Some(d)))
            .map_err(|e| e.to_string()),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph from a named family.
    Generate(commands::GenerateArgs),
    /// Compute a minimum-width path decomposition and an optimal schedule.
    Solve(commands::SolveArgs),
    /// Validate a schedule or decomposition against a graph.
    Verify(commands::VerifyArgs),
    /// Convert between schedules and path decompositions.
    Convert(commands::ConvertArgs),
    /// Run a schedule on the streaming simulator.
    Simulate(commands::SimulateArgs),
    /// Solve a corpus of graphs and tabulate the results.
    Bench(bench::BenchArgs),
}

/// Settings shared by all commands.
pub struct Ctx {
    pub format: Format,
    pub seed: u64,
    pub budget: Option<Duration>,
    pub quiet: bool,
}

impl Ctx {
    pub fn note(&self, msg: &str) {
        if !self.quiet {
            eprintln!("note: {msg}");
        }
    }

    pub fn emit(&self, text: &str) -> Result<(), Failure> {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())
            .and_then(|_| out.flush())
            .map_err(Failure::input)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID_INPUT
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = Ctx {
        format: cli.global.format,
        seed: cli.global.seed,
        budget: cli.global.budget.0,
        quiet: cli.global.quiet,
    };
    let result = match &cli.command {
        Command::Generate(a) => commands::generate(&ctx, a),
        Command::Solve(a) => commands::solve(&ctx, a),
        Command::Verify(a) => commands::verify(&ctx, a),
        Command::Convert(a) => commands::convert(&ctx, a),
        Command::Simulate(a) => commands::simulate(&ctx, a),
        Command::Bench(a) => bench::bench(&ctx, a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Resolves `--out`; `-` and absence both mean stdout.
pub fn out_path(p: &Option<PathBuf>) -> Option<&PathBuf> {
    p.as_ref().filter(|p| p.as_os_str() != "-")
}
