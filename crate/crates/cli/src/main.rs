use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qunit_cli::commands::{cmd_basis, cmd_closure, cmd_simulate, cmd_synth, cmd_verify, BasisArgs, ClosureArgs, SimulateArgs, SynthArgs, VerifyArgs};

/// Gate synthesis and processor simulation for radix-n quantum circuits.
#[derive(Debug, Parser)]
#[command(name = "qunit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the n^{2k}-element Hermitian basis.
    Basis(BasisArgs),
    /// Bracket closure and universality of a gate set.
    Closure(ClosureArgs),
    /// Compile a target unitary into a pulse program.
    Synth(SynthArgs),
    /// Recompute a program's distance to a target.
    Verify(VerifyArgs),
    /// Run a program on a data-bus state.
    Simulate(SimulateArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Basis(a) => cmd_basis(a, &mut out),
        Command::Closure(a) => cmd_closure(a, &mut out),
        Command::Synth(a) => cmd_synth(a, &mut out),
        Command::Verify(a) => cmd_verify(a, &mut out),
        Command::Simulate(a) => cmd_simulate(a, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
