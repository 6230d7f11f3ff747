//! `qline`: command-line front end for the line-protocol toolkit.
//!
//! Exit codes: 0 ok, 1 a checked bound failed or internal error,
//! 2 parse/validation error, 3 simulation cap exceeded, 4 precondition failed.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Opts;

#[derive(Debug, Parser)]
#[command(
    name = "qline",
    version,
    about = "Simulate, compile and audit quantum line protocols"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a line protocol on basis inputs.
    SimulateLine(Opts),
    /// Compile a line protocol into a two-party protocol.
    Compile(Opts),
    /// Simulate a two-party protocol on basis inputs.
    #[command(name = "simulate-2p")]
    Simulate2p(Opts),
    /// Audit information bounds of a line protocol and its compiled form.
    Audit(Opts),
    /// Run the delay-d Set Disjointness algorithm on one input pair.
    Disjointness(Opts),
    /// Run a two-oracle query algorithm.
    QueryRun(Opts),
    /// Evaluate the closed-form bounds on a grid.
    Bounds(Opts),
    /// Grid sweeps: bounds, disjointness or pipeline.
    Sweep(Opts),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::SimulateLine(o) => o.resolve().and_then(|c| commands::simulate_line(&c)),
        Command::Compile(o) => o.resolve().and_then(|c| commands::compile(&c)),
        Command::Simulate2p(o) => o.resolve().and_then(|c| commands::simulate_two_party(&c)),
        Command::Audit(o) => o.resolve().and_then(|c| commands::audit(&c)),
        Command::Disjointness(o) => o.resolve().and_then(|c| commands::disjointness(&c)),
        Command::QueryRun(o) => o.resolve().and_then(|c| commands::query_run(&c)),
        Command::Bounds(o) => o.resolve().and_then(|c| commands::bounds(&c)),
        Command::Sweep(o) => o.resolve().and_then(|c| commands::sweep(&c)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
