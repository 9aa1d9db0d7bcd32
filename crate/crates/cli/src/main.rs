mod angle;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use config::{Flags, RunConfig};

/// Exactly solvable two-level drives: fields, gates, sweeps and fringes.
#[derive(Debug, Parser)]
#[command(name = "twolevel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fields and exact propagator on a uniform grid.
    Solve(Flags),
    /// Hadamard gate time and pulse for a polynomial family.
    #[command(name = "design-hadamard")]
    DesignHadamard(Flags),
    /// Transition probability across cubic sweeps.
    Narp(Flags),
    /// Time-averaged probability of a repeated cubic sweep against T.
    Fringe(Flags),
    /// Compare the closed form with direct integration; exit 0 iff within --tol.
    Verify(Flags),
}

#[derive(Debug)]
pub enum CliError {
    /// Unparseable or inconsistent configuration (exit 2).
    Malformed(String),
    /// Rejected by the library (exit 1).
    Core(exact_twolevel::Error),
    /// A computed report that failed its checks (exit 1).
    Failed(Value),
    Io(String),
}

impl From<exact_twolevel::Error> for CliError {
    fn from(e: exact_twolevel::Error) -> Self {
        CliError::Core(e)
    }
}

/// Variant name of a library error, e.g. `OutOfBounds`.
fn error_kind(e: &exact_twolevel::Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("").to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    type Run = fn(&RunConfig) -> Result<(), CliError>;
    let (flags, name, run): (Flags, &str, Run) = match cli.command {
        Command::Solve(f) => (f, "solve", commands::solve),
        Command::DesignHadamard(f) => (f, "design-hadamard", commands::design),
        Command::Narp(f) => (f, "narp", commands::narp),
        Command::Fringe(f) => (f, "fringe", commands::fringe),
        Command::Verify(f) => (f, "verify", commands::verify),
    };
    let result = RunConfig::from_flags(flags, name).and_then(|cfg| run(&cfg));
    let (code, report) = match result {
        Ok(()) => return ExitCode::SUCCESS,
        Err(CliError::Malformed(msg)) => (2, json!({ "status": "malformed", "message": msg })),
        Err(CliError::Core(e)) => (
            1,
            json!({ "status": "error", "kind": error_kind(&e), "message": e.to_string() }),
        ),
        Err(CliError::Failed(doc)) => (1, doc),
        Err(CliError::Io(msg)) => (1, json!({ "status": "io", "message": msg })),
    };
    eprint!("{}", output::pretty(&report));
    ExitCode::from(code)
}
