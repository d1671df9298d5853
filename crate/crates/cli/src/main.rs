//! `uedalab`: batch driver for linearization, sweeps, family comparisons and
//! majorant certification. Results go to CSV (and a JSON summary) under `--out`,
//! or the CSV to stdout when no output directory is given.
//!
//! Exit codes: 0 success, 1 input error, 2 finite type / obstructed,
//! 3 violated bound.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Precision, RunConfig};

#[derive(Parser)]
#[command(name = "uedalab", version, about = "Linearization of neighbourhoods of cycles of rational curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Linearize a transition system order by order.
    Linearize(Common),
    /// Classify multipliers and linearize a seeded toy system for each.
    Sweep(Common),
    /// Solve a parameterized cochain on arc boxes, or run the naive-vs-uniform comparison.
    Family(Common),
    /// Compute a toy or general majorant, optionally checking domination of a system.
    Majorant(Common),
    /// Check d(1, sigma^m) >= A m^-alpha for a list of multipliers.
    Diophantine(Common),
    /// Solve the coboundary equation on a cycle cover.
    CechSolve(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output directory for CSV and JSON files.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum, default_value_t = Precision::Float)]
    precision: Precision,
    #[arg(long, default_value_t = 1)]
    m0: u32,
    #[arg(long)]
    quiet: bool,
}

impl From<Common> for RunConfig {
    fn from(c: Common) -> Self {
        RunConfig {
            input: c.input,
            out: c.out,
            order: c.order,
            seed: c.seed,
            samples: c.samples,
            precision: c.precision,
            m0: c.m0,
            quiet: c.quiet,
        }
    }
}

fn init_threads() {
    if let Some(n) = std::env::var("UEDALAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let result = match cli.command {
        Command::Linearize(c) => commands::cmd_linearize(&c.into()),
        Command::Sweep(c) => commands::cmd_sweep(&c.into()),
        Command::Family(c) => commands::cmd_family(&c.into()),
        Command::Majorant(c) => commands::cmd_majorant(&c.into()),
        Command::Diophantine(c) => commands::cmd_diophantine(&c.into()),
        Command::CechSolve(c) => commands::cmd_cech_solve(&c.into()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
