use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;

use config::{RunArgs, TurbineArgs};

/// Parametric wind turbine power curves.
#[derive(Debug, Parser)]
#[command(name = "powercurve", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize one power curve
    Generate(GenerateArgs),
    /// Vary one parameter around a base configuration
    Sweep(SweepArgs),
    /// Fill missing turbine characteristics with statistical defaults
    Defaults(DefaultsArgs),
    /// Tabulate Cp(lambda) for the bundled parameterisations
    CpTable(CpTableArgs),
    /// Match measured curves against synthesized ones over a TI grid
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Output CSV; metadata goes next to it as <stem>.meta.json
    #[arg(long, short, default_value = "power_curve.csv")]
    output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Parameter to vary, e.g. rotor_diameter, ti, cp_parameterisation
    #[arg(long)]
    param: String,
    /// Comma-separated values (names for cp_parameterisation)
    #[arg(long, conflicts_with = "range")]
    values: Option<String>,
    /// min,max,count
    #[arg(long)]
    range: Option<String>,
    #[arg(long, short, default_value = "sweep.csv")]
    output: PathBuf,
}

#[derive(Debug, Args)]
pub struct DefaultsArgs {
    #[command(flatten)]
    turbine: TurbineArgs,
    /// Turbine CSV; every row is completed
    #[arg(long, conflicts_with_all = ["diameter", "rated_power"])]
    input: Option<PathBuf>,
    /// Write JSON here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CpTableArgs {
    /// Only this parameterisation (default: all)
    #[arg(long)]
    model: Option<String>,
    /// Comma-separated pitch angles, degrees
    #[arg(long, default_value = "0,1,3,5")]
    beta: String,
    #[arg(long, default_value_t = 16.0)]
    lambda_max: f64,
    #[arg(long, default_value_t = 0.1)]
    dlambda: f64,
    /// Rescale every model to this peak Cp
    #[arg(long)]
    cp_max: Option<f64>,
    /// Write CSV here instead of stdout
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write the coefficient registry as JSON
    #[arg(long)]
    export_registry: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Directory of <name>.csv curves with <name>.json specs
    dir: PathBuf,
    /// Comma-separated TI grid
    #[arg(long, default_value = "0,0.025,0.05,0.075,0.1")]
    ti_grid: String,
    #[arg(long, default_value_t = 1.225)]
    rho: f64,
    #[arg(long, default_value = "Dai2016")]
    cp_model: String,
    #[arg(long, default_value = "validation_report.json")]
    report: PathBuf,
    #[arg(long, default_value = "validation_summary.csv")]
    summary: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Defaults(a) => commands::defaults(a),
        Command::CpTable(a) => commands::cp_table(a),
        Command::Validate(a) => commands::validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{line}");
            ExitCode::from(if e.is_numeric() { 3 } else { 2 })
        }
    }
}
