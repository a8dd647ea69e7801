//! The `ginv` experiment runner: `ginv run` executes one experiment and
//! writes a JSON result, `ginv report` turns a result into CSV or Markdown.

pub mod config;
pub mod experiments;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ginv::analysis::ConcentrationFamily;
use ginv::train::LossKind;
use serde::de::DeserializeOwned;

pub use config::{Experiment, ExperimentConfig, GraphArg};
pub use experiments::{run, ExperimentResult, Report};
pub use report::{render, Format};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("experiment failed: {0}")]
    Runtime(ginv::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Runtime(_) | CliError::Io(_) => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "ginv", version, about = "Group-invariant quantum model experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one experiment and write its JSON result.
    Run(Box<RunArgs>),
    /// Render a result file as CSV or Markdown.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
}

fn serde_name<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    experiment: Option<Experiment>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    /// Measurement shots per estimate; 0 evaluates exactly.
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Result path; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long, value_enum)]
    variant: Option<config::Variant>,
    #[arg(long, value_enum)]
    measure: Option<config::MeasureName>,
    #[arg(long, value_delimiter = ',')]
    q_set: Option<Vec<usize>>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long, value_enum)]
    group: Option<config::GroupName>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// `path:3`, `cycle:4`, `star:4`, `complete:3`, `empty:3` or edge-list JSON.
    #[arg(long, value_parser = GraphArg::parse)]
    g0: Option<GraphArg>,
    #[arg(long, value_parser = GraphArg::parse)]
    g1: Option<GraphArg>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    /// `mse_labels` or `margin_separation`.
    #[arg(long, value_parser = serde_name::<LossKind>)]
    loss: Option<LossKind>,
    /// `conventional` or `enhanced`.
    #[arg(long, value_parser = serde_name::<ConcentrationFamily>)]
    family: Option<ConcentrationFamily>,
    #[arg(long, value_delimiter = ',')]
    n_values: Option<Vec<usize>>,
}

impl RunArgs {
    fn flags(&self) -> ExperimentConfig {
        ExperimentConfig {
            experiment: self.experiment,
            n: self.n,
            samples: self.samples,
            shots: self.shots,
            seed: self.seed,
            output: self.output.clone(),
            b: self.b,
            variant: self.variant,
            measure: self.measure,
            q_set: self.q_set.clone(),
            j: self.j,
            group: self.group,
            d: self.d,
            k: self.k,
            g0: self.g0.clone(),
            g1: self.g1.clone(),
            t: self.t,
            iterations: self.iterations,
            learning_rate: self.learning_rate,
            loss: self.loss,
            family: self.family,
            n_values: self.n_values.clone(),
        }
    }
}

/// Writes through a sibling temp file and a rename, so a failed run never
/// leaves a partial result behind.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("GINV_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("GINV_THREADS must be a positive integer, got `{v}`")))?;
    // A pool may already exist when called twice in one process; keep it.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn run_command(args: &RunArgs) -> Result<(), CliError> {
    configure_threads()?;
    let base = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        None => ExperimentConfig::default(),
    };
    let config = base.merged(&args.flags()).resolved()?;
    let result = run(&config)?;
    let json = result.to_json();
    match &config.output {
        Some(path) => write_atomic(path, &json)?,
        None => std::io::stdout().write_all(json.as_bytes())?,
    }
    Ok(())
}

fn report_command(file: &Path, format: Format) -> Result<(), CliError> {
    let text = fs::read_to_string(file).map_err(|e| CliError::Validation(format!("cannot read {}: {e}", file.display())))?;
    let result = ExperimentResult::from_json(&text)?;
    std::io::stdout().write_all(render(&result, format).as_bytes())?;
    Ok(())
}

/// Parses arguments, runs the command, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match &cli.command {
        Command::Run(args) => run_command(args),
        Command::Report { file, format } => report_command(file, *format),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("ginv: {e}");
            e.exit_code()
        }
    }
}
