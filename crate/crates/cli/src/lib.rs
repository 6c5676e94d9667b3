//! `amplify` command line: configuration parsing, command dispatch and
//! output bundles.

pub mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use amplify_core::agents::RegimeKind;
use amplify_core::engine::{run, write_samples_csv, RunSummary};
use amplify_core::lab::{
    optimize_atrophy_detailed, render_report, run_sweep_detailed, CellSummary, OptResult, ReportDocument,
    ReportInput, RunRecord,
};
use clap::{Args, Parser, Subcommand};
use log::info;
use serde::{Deserialize, Serialize};

pub use config::ConfigDocument;

pub const EXIT_CONFIG: u8 = 3;
pub const EXIT_SIMULATION: u8 = 4;
pub const EXIT_IO: u8 = 5;

const EXIT_HELP: &str = "\
Exit status:
  0  success
  2  bad command line
  3  invalid configuration (parse error, unknown key, or out-of-range value)
  4  simulation failure
  5  file or bundle error

Logging: set AMPLIFY_LOG to error, info (default) or debug.";

#[derive(Debug, Parser)]
#[command(name = "amplify", version, about = "Human-AI reliance simulations", after_help = EXIT_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one (configuration, seed) run.
    Run(SimArgs),
    /// Run every regime x configuration cell over a range of seeds.
    Sweep(SimArgs),
    /// Grid search over the atrophy rate under the capability constraint.
    Optimize(SimArgs),
    /// Re-render report files from a bundle's summary.json.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Configuration file; every key is optional.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Run seed (`run`) or root seed (`sweep`, `optimize`).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "amplify-out")]
    pub out: PathBuf,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Five seeds and half-length phases.
    #[arg(long)]
    pub fast: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Bundle directory holding summary.json.
    pub bundle: PathBuf,
    /// Where to write the report files; defaults to the bundle itself.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] amplify_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("bundle error: {0}")]
    Bundle(String),
}

impl CliError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        fn core(e: &amplify_core::Error) -> u8 {
            use amplify_core::Error as E;
            match e {
                E::InvalidConfig { .. } | E::InvalidWeights(_) | E::EmptyInput(_) => EXIT_CONFIG,
                E::Cell { source, .. } => core(source),
                _ => EXIT_SIMULATION,
            }
        }
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Core(e) => core(e),
            CliError::Io { .. } | CliError::Bundle(_) => EXIT_IO,
        }
    }
}

/// What `report` re-renders from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StoredSummary {
    Run { summary: Box<RunSummary>, cell: Box<CellSummary> },
    Sweep { cells: Vec<CellSummary> },
    Optimize { result: OptResult },
}

impl StoredSummary {
    fn report(&self) -> Result<ReportDocument, CliError> {
        let input = match self {
            StoredSummary::Run { cell, .. } => ReportInput::Cells(std::slice::from_ref(cell.as_ref())),
            StoredSummary::Sweep { cells } => ReportInput::Cells(cells),
            StoredSummary::Optimize { result } => ReportInput::Optimization(result),
        };
        Ok(render_report(input)?)
    }
}

#[derive(Serialize)]
struct RunIndexEntry<'a> {
    label: &'a str,
    regime: RegimeKind,
    replicate: usize,
    seed: u64,
    samples: String,
    summary: &'a RunSummary,
}

#[derive(Serialize)]
struct Metadata<'a> {
    command: &'a str,
    version: &'a str,
    created_unix_secs: u64,
    workers: Option<usize>,
}

pub fn main_entry() -> ExitCode {
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or("AMPLIFY_LOG", "info"))
        .format_timestamp(None)
        .format_target(false)
        .try_init();
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn dispatch(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Run(a) => simulate("run", a),
        Command::Sweep(a) => simulate("sweep", a),
        Command::Optimize(a) => simulate("optimize", a),
        Command::Report(a) => report(a),
    }
}

/// Config file, then `--fast`, then `--seed`.
pub fn resolve(args: &SimArgs) -> Result<ConfigDocument, CliError> {
    let mut doc = match &args.config {
        Some(path) => ConfigDocument::load(path)?,
        None => ConfigDocument::default(),
    };
    if args.fast {
        doc.apply_fast();
    }
    if let Some(seed) = args.seed {
        doc.engine.seed = seed;
    }
    Ok(doc)
}

fn simulate(command: &str, args: &SimArgs) -> Result<(), CliError> {
    if args.workers == Some(0) {
        return Err(CliError::Config("--workers: must be positive".into()));
    }
    let doc = resolve(args)?;
    let out = Bundle::create(&args.out)?;

    let stored = match command {
        "run" => {
            let config = doc.sim_config()?;
            info!(
                "run: {} regime, {} agents, {} ticks, seed {}",
                config.regime.name,
                config.n_agents,
                config.total_ticks(),
                config.seed
            );
            let result = run(&config)?;
            let mut csv = Vec::new();
            write_samples_csv(&result.samples, &mut csv).map_err(|e| CliError::io(&out.path("samples.csv"), e))?;
            out.write("samples.csv", &csv)?;
            let cell = CellSummary::aggregate(
                "run",
                config.regime.name,
                config.dynamics.sensitivity,
                config.dynamics.delta,
                std::slice::from_ref(&result.summary),
            );
            StoredSummary::Run {
                summary: Box::new(result.summary),
                cell: Box::new(cell),
            }
        }
        "sweep" => {
            let spec = doc.sweep_spec()?;
            info!(
                "sweep: {} regimes x {} configurations x {} seeds",
                spec.regimes.len(),
                spec.configs.len(),
                spec.seeds.len()
            );
            let outcome = run_sweep_detailed(&spec, args.workers)?;
            out.write_runs(&outcome.runs)?;
            StoredSummary::Sweep { cells: outcome.cells }
        }
        "optimize" => {
            let spec = doc.opt_spec()?;
            info!("optimize: {} atrophy rates x {} seeds", spec.delta_grid.len(), spec.seeds.len());
            let (result, runs) = optimize_atrophy_detailed(&spec, args.workers)?;
            out.write_runs(&runs)?;
            StoredSummary::Optimize { result }
        }
        other => unreachable!("unknown simulation command {other}"),
    };

    out.write("config.toml", doc.snapshot().as_bytes())?;
    out.write("summary.json", &to_json(&stored))?;
    out.write_report(&stored.report()?)?;
    let meta = Metadata {
        command,
        version: env!("CARGO_PKG_VERSION"),
        created_unix_secs: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        workers: args.workers,
    };
    out.write("metadata.json", &to_json(&meta))?;
    info!("wrote {}", out.root.display());
    Ok(())
}

fn report(args: &ReportArgs) -> Result<(), CliError> {
    let path = args.bundle.join("summary.json");
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let stored: StoredSummary =
        serde_json::from_str(&text).map_err(|e| CliError::Bundle(format!("{}: {e}", path.display())))?;
    let out = Bundle::create(args.out.as_ref().unwrap_or(&args.bundle))?;
    out.write_report(&stored.report()?)?;
    info!("rendered report into {}", out.root.display());
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("summaries always serialize");
    bytes.push(b'\n');
    bytes
}

struct Bundle {
    root: PathBuf,
}

impl Bundle {
    fn create(root: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Bundle {
            root: root.to_path_buf(),
        })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn write(&self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.path(name);
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))
    }

    fn write_report(&self, doc: &ReportDocument) -> Result<(), CliError> {
        self.write("report.csv", doc.csv.as_bytes())?;
        self.write("report.txt", doc.table.as_bytes())?;
        for (stem, csv) in &doc.plots {
            self.write(&format!("{stem}.csv"), csv.as_bytes())?;
        }
        Ok(())
    }

    fn write_runs(&self, runs: &[RunRecord]) -> Result<(), CliError> {
        let mut index = Vec::with_capacity(runs.len());
        for r in runs {
            let name = format!("runs/{}_{}_r{:02}.csv", file_stem(&r.label), r.regime, r.replicate);
            let mut csv = Vec::new();
            write_samples_csv(&r.result.samples, &mut csv).map_err(|e| CliError::io(&self.path(&name), e))?;
            self.write(&name, &csv)?;
            index.push(RunIndexEntry {
                label: &r.label,
                regime: r.regime,
                replicate: r.replicate,
                seed: r.seed,
                samples: name,
                summary: &r.result.summary,
            });
        }
        self.write("runs.json", &to_json(&index))
    }
}

fn file_stem(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '=') { c } else { '_' })
        .collect()
}
