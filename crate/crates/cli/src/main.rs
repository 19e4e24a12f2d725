//! `inertphase`: batch runner for neutron, ring, compare and sweep scenarios.
//!
//! Exit codes: 0 success, 2 usage, 3 parse, 4 validation/configuration,
//! 5 convergence, 6 physical validity, 7 numerical, 8 I/O.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use inertphase::scenario::{self, ScenarioKind};
use inertphase::{Error, ErrorKind};

#[derive(Parser)]
#[command(
    name = "inertphase",
    version,
    about = "Neutron magnetic phase vs. classical current-loop Lagrangian"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Neutron action, phase shift and fringe intensity.
    Neutron(RunArgs),
    /// Ring fluid energy back-reaction and Lagrangian constancy.
    Ring(RunArgs),
    /// Neutron and matched ring through the same field.
    Compare(RunArgs),
    /// Parameter sweep over pulse amplitude.
    Sweep(RunArgs),
    /// Load and validate a scenario without running it.
    Validate(ConfigArg),
}

#[derive(Args)]
struct ConfigArg {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Output directory; overrides `output.dir` in the scenario.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweep sub-runs.
    #[arg(long)]
    workers: Option<usize>,
    /// Reserved. All computation is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

fn exit_code(err: &Error) -> u8 {
    match err.kind() {
        ErrorKind::Parse => 3,
        ErrorKind::Validation | ErrorKind::Config => 4,
        ErrorKind::Convergence => 5,
        ErrorKind::PhysicalValidity => 6,
        ErrorKind::Numerical => 7,
        ErrorKind::Io => 8,
    }
}

fn run(kind: ScenarioKind, args: &RunArgs) -> Result<(), Error> {
    if let Some(w) = args.workers {
        if w == 0 {
            return Err(Error::Config("--workers must be at least 1".into()));
        }
    }
    let scenario = scenario::load_scenario_as(&args.config.config, Some(kind))?;
    let out = args
        .out
        .clone()
        .or_else(|| scenario.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let record = scenario::execute(&scenario, args.workers)?;
    let written = scenario::write_outputs(&record, &out)?;
    println!("{}", record.summary);
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn validate(args: &ConfigArg) -> Result<(), Error> {
    let s = scenario::load_scenario(&args.config)?;
    match &s.sweep {
        Some(sweep) => println!(
            "ok: {} ({}, {} sub-runs of {})",
            s.id,
            s.kind,
            sweep.runs.len(),
            sweep.target
        ),
        None => println!("ok: {} ({})", s.id, s.kind),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Neutron(a) => run(ScenarioKind::Neutron, a),
        Command::Ring(a) => run(ScenarioKind::Ring, a),
        Command::Compare(a) => run(ScenarioKind::Compare, a),
        Command::Sweep(a) => run(ScenarioKind::Sweep, a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
