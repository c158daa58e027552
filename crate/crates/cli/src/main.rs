//! cavrevive: scenario runner for collapse/revival dynamics of qubits
//! resonantly coupled to one cavity mode. Subcommands turn a flat key=value
//! config into figure-ready CSV/JSON tables plus a JSON metadata sidecar.

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CliError, CliResult, QfuncKind};
use config::{OutputFormat, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "cavrevive",
    version,
    about = "Collapse and revival simulator for qubits resonantly coupled to a cavity mode"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Field,
    Spin,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a scenario and write one row per time point
    Evolve {
        #[arg(long)]
        config: PathBuf,
        /// Output file; stdout when omitted (no sidecar then)
        #[arg(long)]
        output: Option<PathBuf>,
        /// Overrides output.format from the config
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Husimi Q function of the field or the register at one instant
    Qfunc {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Evaluation time in units of 1/λ
        #[arg(long, default_value_t = 0.0)]
        time: f64,
        #[arg(long, value_enum, default_value = "field")]
        kind: KindArg,
        /// Points per axis (field: N×N square; spin: N polar × 2N−1 azimuth)
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Collapse, revival and attractor times for the configured model
    Times {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Initial tangle and attractor capture across the basin disc
    BasinScan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Run the built-in numerical self-checks and report residuals
    Verify {
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> CliResult<()> {
    init_thread_pool()?;
    match cli.command {
        Command::Evolve {
            config,
            output,
            format,
        } => {
            let cfg = load(&config)?;
            let (out, fmt) = resolve_io(&cfg, output, format);
            commands::run_evolve(&cfg, out.as_deref(), fmt)
        }
        Command::Qfunc {
            config,
            output,
            format,
            time,
            kind,
            grid,
        } => {
            let cfg = load(&config)?;
            let (out, fmt) = resolve_io(&cfg, output, format);
            let kind = match kind {
                KindArg::Field => QfuncKind::Field,
                KindArg::Spin => QfuncKind::Spin,
            };
            commands::run_qfunc(&cfg, out.as_deref(), fmt, time, kind, grid)
        }
        Command::Times {
            config,
            output,
            format,
        } => {
            let cfg = load(&config)?;
            let fmt = format
                .map(OutputFormat::from)
                .or(cfg.output_format)
                .unwrap_or(OutputFormat::Json);
            let out = output.or_else(|| cfg.output_path.as_ref().map(PathBuf::from));
            commands::run_times(&cfg, out.as_deref(), fmt)
        }
        Command::BasinScan {
            config,
            output,
            format,
        } => {
            let cfg = load(&config)?;
            let (out, fmt) = resolve_io(&cfg, output, format);
            commands::run_basin_scan(&cfg, out.as_deref(), fmt)
        }
        Command::Verify { output } => commands::run_verify(output.as_deref()),
    }
}

fn load(path: &std::path::Path) -> CliResult<ScenarioConfig> {
    ScenarioConfig::load(path).map_err(CliError::Config)
}

/// Flag beats config; tables default to CSV.
fn resolve_io(
    cfg: &ScenarioConfig,
    output: Option<PathBuf>,
    format: Option<FormatArg>,
) -> (Option<PathBuf>, OutputFormat) {
    let fmt = format
        .map(OutputFormat::from)
        .or(cfg.output_format)
        .unwrap_or(OutputFormat::Csv);
    let out = output.or_else(|| cfg.output_path.as_ref().map(PathBuf::from));
    (out, fmt)
}

/// CAVREVIVE_THREADS caps rayon's worker count for every subcommand.
fn init_thread_pool() -> CliResult<()> {
    match std::env::var("CAVREVIVE_THREADS") {
        Err(_) => Ok(()),
        Ok(v) => {
            let n: usize = v
                .parse()
                .ok()
                .filter(|n| *n > 0)
                .ok_or_else(|| {
                    CliError::Config(format!(
                        "CAVREVIVE_THREADS must be a positive integer, got '{v}'"
                    ))
                })?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Config(format!("cannot configure thread pool: {e}")))
        }
    }
}
