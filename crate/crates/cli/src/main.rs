use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zslab::config::{load, RunConfig, SweepConfig};
use zslab::verify::{self, Suite};
use zslab::{cmd_plot, cmd_simulate, cmd_sweep, CliError};

/// Gradient descent dynamics in 2x2 zero-sum games.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and write tables, figures and a summary.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a grid of games, step sizes and seeds and write summary.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a self-check suite; exits with status 2 on failure.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Horizon or sample count; defaults depend on the suite.
        #[arg(long)]
        t_max: Option<usize>,
    },
    /// Render an SVG from a CSV table.
    Plot {
        #[arg(long)]
        input: PathBuf,
        /// `orbit` or `line:<column>`.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Simulate { config } => {
            let cfg: RunConfig = load(&config)?;
            let s = cmd_simulate(&cfg)?;
            let m = &s.metrics;
            println!("iterations      {}", s.iterations);
            println!("final regret    {}", m.final_regret);
            match m.boundary_entry {
                Some(b) => println!("boundary entry  {b}"),
                None => println!("boundary entry  not found"),
            }
            println!("partitions      {}", m.partitions);
            println!("regret² fit R²  {}", s.envelope_fit.r_squared);
            for f in &s.files {
                println!("wrote {}", f.display());
            }
        }
        Command::Sweep { config } => {
            let cfg: SweepConfig = load(&config)?;
            let rows = cmd_sweep(&cfg)?;
            let failed = rows.iter().filter(|r| !r.error.is_empty()).count();
            println!("{} runs, {} failed", rows.len(), failed);
            println!("wrote {}", cfg.outputs.join("summary.csv").display());
        }
        Command::Verify { suite, t_max } => {
            let report = verify::run(suite, t_max.unwrap_or_else(|| verify::default_size(suite)));
            println!("{report}");
            if !report.passed() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Plot { input, kind, out } => {
            cmd_plot(&input, &kind, &out)?;
            println!("wrote {}", out.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
