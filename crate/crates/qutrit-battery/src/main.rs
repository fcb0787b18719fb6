//! Thin CLI over the experiment drivers: parse a config, run, emit CSV.
//!
//! Exit codes: 0 on success, 2 for config problems (unreadable file, parse
//! or validation errors), 3 for runtime failures (diverged integration,
//! unwritable output).

use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qutrit_battery::discharge::DischargeError;
use qutrit_battery::experiments::{
    parse_config_with_overrides, run_charge, run_self_discharge, run_sweep, write_charge_csv,
    write_discharge_csv, write_sweep_csv, ExperimentConfig, ExperimentError,
};

#[derive(Parser)]
#[command(
    name = "qutrit-battery",
    version,
    about = "Charge, sweep, and discharge a three-level quantum battery, as CSV"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one charging run and emit a per-timestep CSV.
    Charge(RunArgs),
    /// Sweep the charging duration and emit one CSV row per grid point.
    Sweep(SweepArgs),
    /// Emit closed-form self-discharge curves, one block per gap ratio.
    SelfDischarge(RunArgs),
    /// Parse the config, apply overrides, and print every resolved key.
    ValidateConfig(ConfigArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Config file of `key = value` lines; omitted means all defaults.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Setting applied after the file, repeatable, later ones win.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Output CSV path; omitted means stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Worker threads for sweep points; omitted or 0 picks automatically.
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
}

enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

fn load_config(args: &ConfigArgs) -> Result<ExperimentConfig, CliError> {
    let text = match &args.config {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?,
        None => String::new(),
    };
    parse_config_with_overrides(&text, &args.overrides).map_err(|e| CliError::Config(e.to_string()))
}

fn emit_csv(
    out: &Option<PathBuf>,
    write: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), CliError> {
    let result = match out {
        Some(path) => fs::File::create(path)
            .map(BufWriter::new)
            .and_then(|mut w| write(&mut w).and_then(|()| w.flush())),
        None => {
            let mut stdout = io::stdout().lock();
            write(&mut stdout).and_then(|()| stdout.flush())
        }
    };
    result.map_err(|e| CliError::Runtime(format!("cannot write output: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Charge(args) => {
            let config = load_config(&args.config)?;
            let trace = run_charge(&config).map_err(|e| CliError::Runtime(e.to_string()))?;
            emit_csv(&args.out, |w| write_charge_csv(w, &trace))
        }
        Command::Sweep(args) => {
            let config = load_config(&args.run.config)?;
            let rows =
                run_sweep(&config, args.workers).map_err(|e| CliError::Runtime(e.to_string()))?;
            emit_csv(&args.run.out, |w| write_sweep_csv(w, &rows))
        }
        Command::SelfDischarge(args) => {
            let config = load_config(&args.config)?;
            let curves = run_self_discharge(&config).map_err(|e| match e {
                // Free decay needs both decay rates set; a config that lacks
                // them is a configuration problem, not a runtime failure.
                ExperimentError::Discharge(DischargeError::NonpositiveRates { .. }) => {
                    CliError::Config(e.to_string())
                }
                other => CliError::Runtime(other.to_string()),
            })?;
            emit_csv(&args.out, |w| write_discharge_csv(w, &curves))
        }
        Command::ValidateConfig(args) => {
            let config = load_config(&args)?;
            let mut stdout = io::stdout().lock();
            for (key, value) in config.entries() {
                writeln!(stdout, "{key} = {value}")
                    .map_err(|e| CliError::Runtime(format!("cannot write output: {e}")))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
