//! `bandspec` — spectra of self-adjoint band operators from finite
//! sections.
//!
//! Reads an operator description (or a Schrödinger discretization) from
//! a JSON config, runs the requested analysis, and writes deterministic
//! JSON or CSV. Exit codes: 0 success, 2 config parse error, 3
//! precondition violation.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{CommandKind, OperatorSource, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "bandspec",
    version,
    about = "Spectral approximation of self-adjoint band operators by finite sections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a grid over the spectral interval; report essential support
    Spectrum(CommonArgs),
    /// Classify a single spectral point
    Classify(ClassifyArgs),
    /// Eigenvalue sample of one section (empirical distribution)
    Distribution(DistributionArgs),
    /// Eigenvalue moments across the schedule vs the walk-sum oracle
    Moments(MomentsArgs),
    /// Essential supports for a list of step sizes (butterfly data)
    Sweep(SweepArgs),
    /// Degree, norm-bound and periodicity diagnostics
    Diagnose(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Operator or discretization config (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Worker threads (default: all available; results do not depend on it)
    #[arg(long)]
    jobs: Option<usize>,
    /// Grid resolution, also the default classification window width
    #[arg(long, default_value_t = 0.05)]
    resolution: f64,
    /// Comma-separated section sizes n1,n2,...
    #[arg(long, value_delimiter = ',')]
    schedule: Option<Vec<usize>>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Point to classify
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    /// Window width (defaults to --resolution)
    #[arg(long)]
    width: Option<f64>,
}

#[derive(Args)]
struct DistributionArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Section size (filtration index)
    #[arg(long)]
    size: usize,
}

#[derive(Args)]
struct MomentsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Largest moment order
    #[arg(long, default_value_t = 8)]
    max_k: usize,
    /// Half-width of the walk-sum averaging window
    #[arg(long, default_value_t = 2000)]
    window: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated step sizes
    #[arg(long, value_delimiter = ',', required = true)]
    sigmas: Vec<f64>,
}

enum Failure {
    /// Unreadable or malformed config: exit 2.
    Config(String),
    /// Violated precondition: exit 3.
    Precondition(Vec<String>),
    /// Output could not be written: exit 1.
    Io(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common) = split(cli.command);
    match run(kind, &common) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Precondition(msgs)) => {
            for msg in msgs {
                eprintln!("error: {msg}");
            }
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn split(command: Command) -> (CommandKind, CommonArgs) {
    match command {
        Command::Spectrum(common) => (CommandKind::Spectrum, common),
        Command::Classify(args) => {
            let width = args.width.unwrap_or(args.common.resolution);
            (
                CommandKind::Classify {
                    lambda: args.lambda,
                    width,
                },
                args.common,
            )
        }
        Command::Distribution(args) => {
            (CommandKind::Distribution { size: args.size }, args.common)
        }
        Command::Moments(args) => (
            CommandKind::Moments {
                max_k: args.max_k,
                window: args.window,
            },
            args.common,
        ),
        Command::Sweep(args) => (
            CommandKind::Sweep {
                sigmas: args.sigmas,
            },
            args.common,
        ),
        Command::Diagnose(common) => (CommandKind::Diagnose, common),
    }
}

fn run(kind: CommandKind, common: &CommonArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&common.config).map_err(|e| {
        Failure::Config(format!(
            "cannot read config {}: {e}",
            common.config.display()
        ))
    })?;
    let source: OperatorSource = serde_json::from_str(&text).map_err(|e| {
        Failure::Config(format!(
            "config {} does not parse as an operator or discretization document: {e}",
            common.config.display()
        ))
    })?;

    let run_config = RunConfig {
        command: kind,
        source,
        schedule: common
            .schedule
            .clone()
            .unwrap_or_else(RunConfig::default_schedule),
        resolution: common.resolution,
        format: common.format,
        jobs: common.jobs,
    };

    let violations = config::validate(&run_config);
    if !violations.is_empty() {
        return Err(Failure::Precondition(violations));
    }

    configure_jobs(run_config.jobs);

    if let OperatorSource::Schrodinger(doc) = &run_config.source {
        if let Ok(params) = doc.params() {
            if let Some((p, q)) = params.rational_sigma_sq_over_pi(64, 1e-9) {
                eprintln!(
                    "warning: sigma^2/pi is within 1e-9 of {p}/{q}; the diagonal sequence \
                     is periodic rather than merely almost periodic"
                );
            }
        }
    }

    let rendered = commands::execute(&run_config)
        .map_err(|e| Failure::Precondition(vec![e.to_string()]))?;

    match &common.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        // A second initialization can only happen in-process (tests);
        // the pool size is advisory, results do not depend on it.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_jobs(_jobs: Option<usize>) {}
