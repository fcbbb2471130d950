//! `exwf`: least elements, prime divisors, descents on composed structures,
//! and the check suites.
//!
//! Exit codes: 0 ok, 1 failed checks, 2 disjointness violated, 3 not
//! locatable, 4 input outside the domain, 5 bad step, 64 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use output::Output;

#[derive(Debug, Parser)]
#[command(name = "exwf", version, about = "Descent search over well-founded structures")]
pub struct Cli {
    /// Range for exhaustive checks, at least 1.
    #[arg(long, global = true, default_value_t = 1024, value_parser = clap::value_parser!(u64).range(1..))]
    pub bound: u64,
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Also write each descent trace as a JSON line to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub trace_out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Least element of the complemented subset (A¹, A⁰), by descent from a
    /// prover.
    Least {
        /// Predicate in `x` for the provers A¹.
        #[arg(long)]
        a1: String,
        /// Predicate in `x` for the refuters A⁰; defaults to `not (A¹)`.
        #[arg(long)]
        a0: Option<String>,
        /// An element of A¹ to start from.
        #[arg(long)]
        start: u64,
    },
    /// A prime divisor of N.
    PrimeDivisor {
        n: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// A descent on a structure built from ℕ, driven by step rules.
    Descent {
        /// JSON file with `structure` and optionally `start`, `found`, `descend`.
        #[arg(long, conflicts_with = "structure")]
        config: Option<PathBuf>,
        /// Structure as inline JSON, e.g. '{"lex": ["nat", "nat"]}'. Defaults to "nat".
        #[arg(long)]
        structure: Option<String>,
        /// Starting element, e.g. 5 or (2,3) or inr 4.
        #[arg(long)]
        start: Option<String>,
        /// Stop rule; repeatable.
        #[arg(long)]
        found: Vec<String>,
        /// Descend rule, tried in order; repeatable.
        #[arg(long)]
        descend: Vec<String>,
    },
    /// Run the check suites.
    Check {
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Check a known-bad set of ℕ oracles instead of the real one.
        #[arg(long, value_enum)]
        mutant: Option<MutantArg>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Descent,
    Clnp,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Axioms,
    Properties,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MutantArg {
    ApartIsEqual,
    ReflexiveLess,
    CollapsingSucc,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { output::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = Output::new(cli.json);
    let result = match &cli.command {
        Command::Least { a1, a0, start } => commands::least(&cli, &out, a1, a0.as_deref(), *start),
        Command::PrimeDivisor { n, method } => commands::prime_divisor(&cli, &out, *n, *method),
        Command::Descent {
            config,
            structure,
            start,
            found,
            descend,
        } => commands::descent(&cli, &out, config.as_deref(), structure.as_deref(), start.as_deref(), found, descend),
        Command::Check { suite, mutant } => commands::check(&cli, &out, *suite, *mutant),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            out.failure(&failure);
            ExitCode::from(failure.code)
        }
    }
}
