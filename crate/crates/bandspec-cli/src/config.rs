//! Run configuration: the operator source parsed from the config file
//! plus the command and flags, with precondition validation.

use serde::{Deserialize, Serialize};

use bandspec::analysis::{DEFAULT_SCHEDULE, MAX_MOMENT_ORDER};
use bandspec::operator::OperatorDocument;
use bandspec::schrodinger::SchrodingerDocument;
use bandspec::Filtration;

/// The config file holds exactly one operator source: either a band
/// operator document or a discretization document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorSource {
    Operator(OperatorDocument),
    Schrodinger(SchrodingerDocument),
}

impl OperatorSource {
    pub fn filtration(&self) -> Filtration {
        match self {
            OperatorSource::Operator(doc) => doc.filtration,
            OperatorSource::Schrodinger(doc) => doc.filtration,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Which analysis to run, with its command-specific arguments.
#[derive(Clone, Debug, PartialEq)]
pub enum CommandKind {
    Spectrum,
    Classify { lambda: f64, width: f64 },
    Distribution { size: usize },
    Moments { max_k: usize, window: usize },
    Sweep { sigmas: Vec<f64> },
    Diagnose,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Spectrum => "spectrum",
            CommandKind::Classify { .. } => "classify",
            CommandKind::Distribution { .. } => "distribution",
            CommandKind::Moments { .. } => "moments",
            CommandKind::Sweep { .. } => "sweep",
            CommandKind::Diagnose => "diagnose",
        }
    }
}

/// Fully assembled run: source document, command, and effective flags.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub source: OperatorSource,
    pub schedule: Vec<usize>,
    pub resolution: f64,
    pub format: OutputFormat,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn default_schedule() -> Vec<usize> {
        DEFAULT_SCHEDULE.to_vec()
    }
}

/// List every precondition violation; the run proceeds only when the
/// list is empty.
pub fn validate(config: &RunConfig) -> Vec<String> {
    let mut violations = Vec::new();

    if config.schedule.len() < 3 {
        violations.push("schedule needs at least 3 sizes".to_string());
    }
    if config.schedule.first().is_some_and(|&n| n == 0) {
        violations.push("schedule sizes must be positive".to_string());
    }
    if config.schedule.windows(2).any(|w| w[1] <= w[0]) {
        violations.push("schedule sizes must be strictly increasing".to_string());
    }
    if config.resolution.is_nan() || config.resolution <= 0.0 {
        violations.push("resolution must be positive".to_string());
    }
    if let Some(jobs) = config.jobs {
        if jobs == 0 {
            violations.push("jobs must be at least 1".to_string());
        }
    }

    match &config.source {
        OperatorSource::Operator(doc) => {
            if let Err(e) = doc.spec() {
                violations.push(e.to_string());
            }
        }
        OperatorSource::Schrodinger(doc) => {
            if doc.sigma.is_nan() || doc.sigma <= 0.0 {
                violations.push("sigma must be positive".to_string());
            }
        }
    }

    match &config.command {
        CommandKind::Spectrum | CommandKind::Diagnose => {}
        CommandKind::Classify { width, .. } => {
            if width.is_nan() || *width <= 0.0 {
                violations.push("width must be positive".to_string());
            }
        }
        CommandKind::Distribution { size } => {
            if *size == 0 {
                violations.push("size must be at least 1".to_string());
            }
        }
        CommandKind::Moments { max_k, window } => {
            if *max_k == 0 || *max_k > MAX_MOMENT_ORDER {
                violations.push(format!(
                    "max moment order must be between 1 and {MAX_MOMENT_ORDER}"
                ));
            }
            if *window == 0 {
                violations.push("window must be at least 1".to_string());
            }
        }
        CommandKind::Sweep { sigmas } => {
            if !matches!(config.source, OperatorSource::Schrodinger(_)) {
                violations
                    .push("sweep requires a discretization config (potential + sigma)".to_string());
            }
            if sigmas.is_empty() {
                violations.push("sweep needs at least one sigma".to_string());
            }
            if sigmas.iter().any(|s| s.is_nan() || *s <= 0.0) {
                violations.push("sweep sigmas must be positive".to_string());
            }
        }
    }

    if config.format == OutputFormat::Csv
        && matches!(
            config.command,
            CommandKind::Spectrum | CommandKind::Classify { .. } | CommandKind::Diagnose
        )
    {
        violations.push(format!(
            "csv output is not available for command {}; use --format json",
            config.command.name()
        ));
    }

    violations
}
