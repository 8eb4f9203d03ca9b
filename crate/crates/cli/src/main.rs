mod config;
mod error;
mod eval;
mod fmt;
mod solve;
mod sweep;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{RunArgs, RunConfig};
use error::CliError;

/// q-special functions, the q-Sturm-Liouville solver and identity checks.
#[derive(Debug, Parser)]
#[command(name = "qcalc", version)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one special function at a point.
    Eval(eval::EvalArgs),
    /// Solve both boundary problems and fit the large-lambda coefficients.
    Solve(solve::SolveArgs),
    /// Run an identity check suite.
    Verify(verify::VerifyArgs),
    /// Tabulate j_alpha against its large-lambda principal term.
    BesselAsym(sweep::BesselArgs),
    /// Heat-kernel records from the Weber integral.
    Heat(sweep::HeatArgs),
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let cfg = RunConfig::resolve(&cli.run)?;
    match &cli.command {
        Command::Eval(a) => eval::run(a, &cfg).map(|_| true),
        Command::Solve(a) => solve::run(a, &cfg).map(|_| true),
        Command::Verify(a) => verify::run(a, &cfg),
        Command::BesselAsym(a) => sweep::bessel_asym(a, &cfg).map(|_| true),
        Command::Heat(a) => sweep::heat(a, &cfg).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qcalc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
