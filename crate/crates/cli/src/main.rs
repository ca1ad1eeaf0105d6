//! `mixmeas`: reproduce the thermal-apparatus figures, run β sweeps, and
//! compare the entropy bound against the exact optimum.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use mixmeas::parallel::Execution;
use mixmeas::sweep::{
    convert_units, format_value, gnuplot_script, run_sweep, validity_report, Method, SweepConfig, SweepResult,
};
use mixmeas::thermal_model::{threshold_beta, two_level_pc_closed_form};
use mixmeas::statespace::ThermalSpec;

#[derive(Parser)]
#[command(name = "mixmeas", version, about = "Measurement success bounds for a thermal apparatus")]
struct Cli {
    /// Evaluate grid points on one thread
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Two-level success probability against log10(beta)
    Fig1(FigureArgs),
    /// The exp(H - h) bound for N+1 = 2, 4, 8 against log10(beta)
    Fig2(FigureArgs),
    /// Fully parameterized sweep
    Sweep(SweepArgs),
    /// Bound minus exact optimum over a beta grid
    Validity(ValidityArgs),
    /// Inverse temperature needed for a two-level success probability
    Threshold {
        #[arg(long, default_value_t = 0.8)]
        target: f64,
    },
    /// Convert angular frequency and temperature to beta
    Convert {
        /// Angular frequency in rad/s
        #[arg(long)]
        omega: f64,
        /// Temperature in kelvin
        #[arg(long)]
        temperature: f64,
    },
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    beta_min: Option<f64>,
    #[arg(long)]
    beta_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Largest discarded thermal tail probability
    #[arg(long, default_value_t = ThermalSpec::DEFAULT_TAIL_EPSILON)]
    tail_epsilon: f64,
}

#[derive(Args)]
struct OutputArgs {
    /// CSV output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script plotting the CSV
    #[arg(long, requires = "out")]
    plot_script: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Comma-separated system sizes N+1
    #[arg(long, value_delimiter = ',', default_value = "2")]
    levels: Vec<usize>,
    /// Comma-separated methods: helstrom-closed, helstrom-numeric, bayes-exact, holevo-bound, low-temp-approx
    #[arg(long, value_delimiter = ',', default_value = "helstrom-closed")]
    methods: Vec<String>,
    /// Comma-separated priors (single levels value only)
    #[arg(long, value_delimiter = ',')]
    priors: Option<Vec<f64>>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ValidityArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 2)]
    levels: usize,
    #[arg(long, value_delimiter = ',')]
    priors: Option<Vec<f64>>,
    /// Per-point report CSV
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Invalid(anyhow::Error),
    Numeric(anyhow::Error),
}

impl From<mixmeas::Error> for Failure {
    fn from(e: mixmeas::Error) -> Self {
        Failure::Invalid(e.into())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Invalid(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let execution = if cli.sequential { Execution::Sequential } else { Execution::default() };
    match cli.command {
        Command::Fig1(args) => {
            let config = grid_config(SweepConfig::fig1(), &args.grid, execution);
            sweep_and_write(&config, &args.output, "Two-level success probability (Helstrom)")
        }
        Command::Fig2(args) => {
            let config = grid_config(SweepConfig::fig2(), &args.grid, execution);
            sweep_and_write(&config, &args.output, "Upper bound exp(H - h) on success probability")
        }
        Command::Sweep(args) => {
            let methods = args
                .methods
                .iter()
                .map(|m| m.parse::<Method>())
                .collect::<Result<Vec<_>, _>>()?;
            let base = SweepConfig {
                levels: args.levels,
                methods,
                priors: args.priors,
                ..SweepConfig::fig1()
            };
            let config = grid_config(base, &args.grid, execution);
            sweep_and_write(&config, &args.output, "Success probability sweep")
        }
        Command::Validity(args) => {
            let base = SweepConfig {
                levels: vec![args.levels],
                priors: args.priors,
                ..SweepConfig::new(0.1, 10.0, 25)
            };
            let config = grid_config(base, &args.grid, execution);
            config.validate()?;
            let report = validity_report(&config).map_err(|e| Failure::Numeric(e.into()))?;
            print_warnings(&report.warnings);
            if let Some(path) = &args.out {
                let mut buf = Vec::new();
                report.write_csv(&mut buf)?;
                write_file(path, &buf)?;
            }
            println!("{}", report.summary());
            Ok(())
        }
        Command::Threshold { target } => {
            let beta = threshold_beta(target)?;
            println!("target p_c = {target}: beta* = {}", format_value(beta));
            println!(
                "equivalently omega / T >= {} rad s^-1 K^-1 (beta* k_B / hbar)",
                format_value(beta * mixmeas::sweep::K_B / mixmeas::sweep::HBAR)
            );
            println!(
                "at beta = 1 (omega / T = k_B / hbar): p_c = {}",
                format_value(two_level_pc_closed_form(1.0)?)
            );
            Ok(())
        }
        Command::Convert { omega, temperature } => {
            println!("{}", format_value(convert_units(omega, temperature)?));
            Ok(())
        }
    }
}

fn grid_config(base: SweepConfig, grid: &GridArgs, execution: Execution) -> SweepConfig {
    SweepConfig {
        beta_min: grid.beta_min.unwrap_or(base.beta_min),
        beta_max: grid.beta_max.unwrap_or(base.beta_max),
        points: grid.points.unwrap_or(base.points),
        tail_epsilon: grid.tail_epsilon,
        execution,
        ..base
    }
}

fn sweep_and_write(config: &SweepConfig, output: &OutputArgs, title: &str) -> Result<(), Failure> {
    config.validate()?;
    let out = run_sweep(config)?;
    print_warnings(&out.warnings);
    if out.result.is_empty() {
        return Err(Failure::Numeric(anyhow::anyhow!(
            "no requested method could be evaluated on this grid"
        )));
    }
    let mut buf = Vec::new();
    out.result.write_csv(&mut buf)?;
    match &output.out {
        Some(path) => {
            write_file(path, &buf)?;
            eprintln!("wrote {} rows to {}", out.result.rows.len(), path.display());
        }
        None => io::stdout().write_all(&buf).context("writing to stdout")?,
    }
    if let (Some(script), Some(csv)) = (&output.plot_script, &output.out) {
        write_plot_script(script, csv, title, &out.result)?;
    }
    Ok(())
}

fn write_plot_script(script: &Path, csv: &Path, title: &str, result: &SweepResult) -> anyhow::Result<()> {
    let png = csv.with_extension("png");
    let text = gnuplot_script(&csv.display().to_string(), &png.display().to_string(), title, result);
    write_file(script, text.as_bytes())
}

fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn print_warnings(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}
