//! `brl`: run the oscillator/field models from the command line.

// `!(a > b)` is used on purpose so that NaN inputs take the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod presets;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "brl",
    version,
    about = "Point oscillator coupled to a scalar field: simulations, sweeps and acceptance checks"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// Run configuration (`key = value` lines).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Start from a named preset; keys in --config and --set override it.
    #[arg(long, global = true, value_name = "NAME")]
    pub preset: Option<String>,
    /// Output directory, created if missing.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Integrator step.
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Final time.
    #[arg(long, global = true)]
    pub horizon: Option<f64>,
    /// Override one configuration key, e.g. `--set gamma=0.2`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Run batch work on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate the effective dynamics and write the trajectory.
    Simulate,
    /// Print the roots of the wide-memory characteristic cubic.
    Roots,
    /// Check complete reflection of the configured incident wave on the lattice.
    Reflect,
    /// Vary one parameter and write one summary row per run.
    Sweep(SweepArgs),
    /// Run the acceptance criteria and write their tables.
    Verify,
    /// List the built-in presets.
    Presets,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Parameter to vary (any numeric configuration key).
    #[arg(long)]
    pub param: String,
    /// Evenly spaced values `START:STOP:COUNT`, endpoints included.
    #[arg(long, conflicts_with = "values", value_name = "START:STOP:COUNT")]
    pub range: Option<String>,
    /// Explicit comma-separated values.
    #[arg(long, value_name = "V1,V2,...")]
    pub values: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate => commands::simulate(&cli.global),
        Command::Roots => commands::roots(&cli.global),
        Command::Reflect => commands::reflect(&cli.global),
        Command::Sweep(ref args) => commands::sweep(&cli.global, args),
        Command::Verify => commands::verify(&cli.global),
        Command::Presets => {
            for (name, text) in presets::PRESETS {
                let about = text.lines().next().unwrap_or("").trim_start_matches("# ");
                println!("{name:<14} {about}");
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("brl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
