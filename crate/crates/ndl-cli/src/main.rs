//! Experiment harness around the graph library: graph generation, explicit
//! constructions, spectral reports, percolation trials, induced-path and
//! induced-cycle searches, certificates, exact small-scale oracles, and
//! parameter sweeps with machine-readable reports.
//!
//! Exit codes: 0 success, 2 invalid flags/config/input, 3 operation failure.

mod commands;
mod config;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Args;

#[derive(Parser)]
#[command(
    name = "ndl",
    version,
    about = "Induced paths, cycles and percolation experiments on regular pseudo-random graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a seeded random d-regular graph and write graph.txt
    Generate(Args),
    /// Build a blow-up construction (`--what short-path|low-mu`) with a parameter sidecar
    Construct(Args),
    /// Estimate extremal eigenvalues and the spectral ratio of a graph
    Spectral(Args),
    /// Run seeded site-percolation trials and write per-trial component statistics
    Percolate(Args),
    /// Search one percolated sample for a long induced path
    FindPath(Args),
    /// Run the path-then-closure pipeline for a long induced cycle, with retries
    FindCycle(Args),
    /// Emit the induced-subgraph-count lower-bound certificate for a percolated path
    Certificate(Args),
    /// Exact ground truth at small scale (`--what path|cycle|mu|spectrum`)
    Oracle(Args),
    /// Sweep epsilon/d/n grids and aggregate per-cell medians
    Experiment(Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run): (&Args, fn(&config::Params) -> Result<(), config::CliError>) =
        match &cli.command {
            Command::Generate(a) => (a, commands::generate),
            Command::Construct(a) => (a, commands::construct),
            Command::Spectral(a) => (a, commands::spectral),
            Command::Percolate(a) => (a, commands::percolate),
            Command::FindPath(a) => (a, commands::find_path),
            Command::FindCycle(a) => (a, commands::find_cycle),
            Command::Certificate(a) => (a, commands::certificate),
            Command::Oracle(a) => (a, commands::oracle_cmd),
            Command::Experiment(a) => (a, commands::experiment),
        };
    let outcome = config::resolve(args).and_then(|params| run(&params));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ndl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
