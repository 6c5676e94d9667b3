//! Multi-seed experiments: the regime x configuration sweep and the
//! constrained grid search over the atrophy rate.
//!
//! Every (regime, configuration, replicate) cell gets its own seed derived
//! from the cell key alone, so results do not depend on execution order or
//! on how many workers run them.

mod report;

pub use report::{parse_report_csv, render_report, ReportDocument, ReportInput, REPORT_CSV_COLUMNS};

use serde::{Deserialize, Serialize};

use crate::agents::{RegimeKind, RegimeSpec};
use crate::engine::{run, RunResult, RunSummary, SimConfig};
use crate::error::{Error, Result};
use crate::seeding;

pub const DEFAULT_SEED_COUNT: usize = 20;

/// Atrophy grid, strongest to weakest.
pub const DEFAULT_DELTA_GRID: [f64; 9] = [
    0.0040, 0.0035, 0.0030, 0.0025, 0.0020, 0.0015, 0.0010, 0.0005, 0.0000,
];

/// A labelled (dependency-use sensitivity, atrophy rate) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamConfig {
    pub label: String,
    pub sensitivity: f64,
    pub delta: f64,
}

impl ParamConfig {
    pub fn new(label: impl Into<String>, sensitivity: f64, delta: f64) -> Self {
        ParamConfig {
            label: label.into(),
            sensitivity,
            delta,
        }
    }

    /// P0, P1, P2.
    pub fn standard() -> Vec<ParamConfig> {
        vec![
            ParamConfig::new("P0", 0.2, 0.004),
            ParamConfig::new("P1", 0.6, 0.003),
            ParamConfig::new("P2", 0.4, 0.002),
        ]
    }
}

pub fn consecutive_seeds(root: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|i| root.wrapping_add(i)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SimConfig,
    pub regimes: Vec<RegimeKind>,
    pub configs: Vec<ParamConfig>,
    pub seeds: Vec<u64>,
}

impl SweepSpec {
    /// Three regimes x P0/P1/P2 over `n_seeds` consecutive seeds.
    pub fn standard(base: SimConfig, root_seed: u64, n_seeds: usize) -> Self {
        SweepSpec {
            base,
            regimes: RegimeKind::ALL.to_vec(),
            configs: ParamConfig::standard(),
            seeds: consecutive_seeds(root_seed, n_seeds),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.regimes.is_empty() {
            return Err(Error::EmptyInput("sweep regimes"));
        }
        if self.configs.is_empty() {
            return Err(Error::EmptyInput("sweep configurations"));
        }
        if self.seeds.is_empty() {
            return Err(Error::EmptyInput("sweep seeds"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    /// Population standard deviation (denominator = number of seeds).
    pub std: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Stat {
        let n = values.len() as f64;
        if values.windows(2).all(|w| w[0].to_bits() == w[1].to_bits()) {
            return Stat {
                mean: values.first().copied().unwrap_or(f64::NAN),
                std: 0.0,
            };
        }
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Stat { mean, std: var.sqrt() }
    }
}

/// Seed-wise mean and standard deviation for one (configuration, regime) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub label: String,
    pub regime: RegimeKind,
    pub delta: f64,
    pub sensitivity: f64,
    pub cai_star: Stat,
    pub d: Stat,
    pub hri: Stat,
    pub hcdr: Stat,
    pub q_h: Stat,
    pub q_ha: Stat,
    pub skill_mean: Stat,
    pub ai_use_rate: Stat,
}

impl CellSummary {
    pub fn aggregate(label: &str, regime: RegimeKind, sensitivity: f64, delta: f64, runs: &[RunSummary]) -> Self {
        let stat = |f: fn(&RunSummary) -> f64| Stat::of(&runs.iter().map(f).collect::<Vec<_>>());
        CellSummary {
            label: label.to_string(),
            regime,
            delta,
            sensitivity,
            cai_star: stat(|r| r.metrics.cai_star),
            d: stat(|r| r.metrics.d),
            hri: stat(|r| r.metrics.hri),
            hcdr: stat(|r| r.metrics.hcdr),
            q_h: stat(|r| r.q_h),
            q_ha: stat(|r| r.q_ha),
            skill_mean: stat(|r| r.skill_mean),
            ai_use_rate: stat(|r| r.ai_use_rate),
        }
    }

    /// Metric columns in report order.
    pub fn stats(&self) -> [(&'static str, Stat); 8] {
        [
            ("cai_star", self.cai_star),
            ("d", self.d),
            ("hri", self.hri),
            ("hcdr", self.hcdr),
            ("q_h", self.q_h),
            ("q_ha", self.q_ha),
            ("skill_mean", self.skill_mean),
            ("ai_use_rate", self.ai_use_rate),
        ]
    }
}

/// One scheduled simulation.
#[derive(Debug, Clone)]
pub struct CellRun {
    pub cell: usize,
    pub replicate: usize,
    pub config: SimConfig,
}

/// Runs every job and returns summaries in job order.
///
/// `workers = None` uses the global pool; `Some(n)` builds a dedicated pool
/// of `n` threads. Output does not depend on the choice.
pub fn execute(jobs: &[CellRun], workers: Option<usize>) -> Result<Vec<RunSummary>> {
    execute_map(jobs, workers, |r| r.summary)
}

/// Like [`execute`] but keeps the full time series of every run.
pub fn execute_full(jobs: &[CellRun], workers: Option<usize>) -> Result<Vec<RunResult>> {
    execute_map(jobs, workers, |r| r)
}

fn execute_map<T, F>(jobs: &[CellRun], workers: Option<usize>, keep: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(RunResult) -> T + Sync,
{
    let one = |job: &CellRun| {
        run(&job.config).map(&keep).map_err(|e| Error::Cell {
            cell: format!("{} replicate {} seed {}", job.cell, job.replicate, job.config.seed),
            source: Box::new(e),
        })
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let par = || jobs.par_iter().map(one).collect::<Result<Vec<_>>>();
        match workers {
            None => par(),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::config("workers", e.to_string()))?
                .install(par),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        jobs.iter().map(one).collect()
    }
}

/// One finished run of a sweep, keyed by its cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub label: String,
    pub regime: RegimeKind,
    pub replicate: usize,
    pub seed: u64,
    pub result: RunResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub cells: Vec<CellSummary>,
    pub runs: Vec<RunRecord>,
}

fn plan(spec: &SweepSpec) -> (Vec<(&ParamConfig, RegimeKind)>, Vec<CellRun>) {
    let mut keys = Vec::new();
    let mut jobs = Vec::new();
    for (ci, pc) in spec.configs.iter().enumerate() {
        for &regime in &spec.regimes {
            let ri = RegimeKind::ALL.iter().position(|r| *r == regime).unwrap_or(0);
            let cell = keys.len();
            keys.push((pc, regime));
            for (rep, &seed) in spec.seeds.iter().enumerate() {
                let mut config = spec.base.clone();
                config.regime = RegimeSpec::new(regime);
                config.dynamics.sensitivity = pc.sensitivity;
                config.dynamics.delta = pc.delta;
                config.seed = seeding::combine(seed, &[ri as u64, ci as u64, rep as u64]);
                jobs.push(CellRun {
                    cell,
                    replicate: rep,
                    config,
                });
            }
        }
    }
    (keys, jobs)
}

fn aggregate_cells(keys: &[(&ParamConfig, RegimeKind)], summaries: &[RunSummary], per_cell: usize) -> Vec<CellSummary> {
    keys.iter()
        .zip(summaries.chunks(per_cell))
        .map(|((pc, regime), runs)| CellSummary::aggregate(&pc.label, *regime, pc.sensitivity, pc.delta, runs))
        .collect()
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<CellSummary>> {
    run_sweep_with(spec, None)
}

pub fn run_sweep_with(spec: &SweepSpec, workers: Option<usize>) -> Result<Vec<CellSummary>> {
    spec.validate()?;
    let (keys, jobs) = plan(spec);
    let summaries = execute(&jobs, workers)?;
    Ok(aggregate_cells(&keys, &summaries, spec.seeds.len()))
}

/// Sweep that also returns every run's time series.
pub fn run_sweep_detailed(spec: &SweepSpec, workers: Option<usize>) -> Result<SweepOutcome> {
    spec.validate()?;
    let (keys, jobs) = plan(spec);
    let results = execute_full(&jobs, workers)?;
    let summaries: Vec<RunSummary> = results.iter().map(|r| r.summary.clone()).collect();
    let cells = aggregate_cells(&keys, &summaries, spec.seeds.len());
    let runs = jobs
        .iter()
        .zip(results)
        .map(|(job, result)| RunRecord {
            label: keys[job.cell].0.label.clone(),
            regime: keys[job.cell].1,
            replicate: job.replicate,
            seed: job.config.seed,
            result,
        })
        .collect();
    Ok(SweepOutcome { cells, runs })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptSpec {
    /// Mixed regime with sensitivity fixed; `dynamics.delta` is overridden.
    pub base: SimConfig,
    pub delta_grid: Vec<f64>,
    pub seeds: Vec<u64>,
}

impl Default for OptSpec {
    fn default() -> Self {
        OptSpec {
            base: SimConfig::default(),
            delta_grid: DEFAULT_DELTA_GRID.to_vec(),
            seeds: consecutive_seeds(0, DEFAULT_SEED_COUNT),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The selected candidate has CAI* > 0 and HCDR >= 0.
    Amplification,
    /// A feasible candidate exists but none has positive gain.
    BestAttainableCompromise,
    /// No candidate satisfies HCDR >= 0.
    NoFeasibleCandidate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub candidates: Vec<CellSummary>,
    pub best_delta: Option<f64>,
    pub feasible: bool,
    pub amplification_achieved: bool,
    pub verdict: Verdict,
}

impl OptResult {
    pub fn best(&self) -> Option<&CellSummary> {
        let d = self.best_delta?;
        self.candidates.iter().find(|c| c.delta == d)
    }
}

/// Constrained argmax: maximize mean CAI* over candidates with mean HCDR >= 0.
/// Ties go to the smaller atrophy rate.
pub fn select_best(cells: &[CellSummary]) -> Result<OptResult> {
    if cells.is_empty() {
        return Err(Error::EmptyInput("optimization candidates"));
    }
    let best = cells
        .iter()
        .filter(|c| c.hcdr.mean >= 0.0)
        .reduce(|best, c| {
            let better = c.cai_star.mean > best.cai_star.mean
                || (c.cai_star.mean == best.cai_star.mean && c.delta < best.delta);
            if better {
                c
            } else {
                best
            }
        });
    let amplification_achieved = best.is_some_and(|b| b.cai_star.mean > 0.0);
    let verdict = match best {
        None => Verdict::NoFeasibleCandidate,
        Some(_) if amplification_achieved => Verdict::Amplification,
        Some(_) => Verdict::BestAttainableCompromise,
    };
    Ok(OptResult {
        candidates: cells.to_vec(),
        best_delta: best.map(|b| b.delta),
        feasible: best.is_some(),
        amplification_achieved,
        verdict,
    })
}

pub fn optimize_atrophy(spec: &OptSpec) -> Result<OptResult> {
    optimize_atrophy_with(spec, None)
}

pub fn optimize_atrophy_with(spec: &OptSpec, workers: Option<usize>) -> Result<OptResult> {
    let cells = run_sweep_with(&grid_sweep(spec)?, workers)?;
    select_best(&cells)
}

/// Optimization that also returns every run's time series.
pub fn optimize_atrophy_detailed(spec: &OptSpec, workers: Option<usize>) -> Result<(OptResult, Vec<RunRecord>)> {
    let outcome = run_sweep_detailed(&grid_sweep(spec)?, workers)?;
    Ok((select_best(&outcome.cells)?, outcome.runs))
}

fn grid_sweep(spec: &OptSpec) -> Result<SweepSpec> {
    if spec.delta_grid.is_empty() {
        return Err(Error::EmptyInput("delta grid"));
    }
    if spec.seeds.is_empty() {
        return Err(Error::EmptyInput("optimization seeds"));
    }
    if let Some(bad) = spec.delta_grid.iter().find(|d| !(**d >= 0.0 && **d <= 1.0)) {
        return Err(Error::config("optimize.delta_grid", format!("{bad} is outside [0, 1]")));
    }
    Ok(SweepSpec {
        base: spec.base.clone(),
        regimes: vec![RegimeKind::Mixed],
        configs: spec
            .delta_grid
            .iter()
            .map(|&d| ParamConfig::new(format!("delta={d:.4}"), spec.base.dynamics.sensitivity, d))
            .collect(),
        seeds: spec.seeds.clone(),
    })
}
