//! The configuration file: sectioned `key = value` text (TOML).
//!
//! Every key is optional and unknown keys are rejected. A parsed document
//! serializes back with every default expanded, which is what bundles store
//! as their config snapshot.

use std::path::Path;

use amplify_core::agents::{AtrophyScope, DynamicsConfig, RegimeKind, RegimeSpec};
use amplify_core::engine::SimConfig;
use amplify_core::environment::{
    EnvSpec, DEFAULT_BASE_DIFFICULTY, DEFAULT_FAMILY_WEIGHTS, DEFAULT_NOVELTY_WEIGHTS, DEFAULT_PHASE3_WEIGHTS,
    FAMILY_COUNT,
};
use amplify_core::lab::{consecutive_seeds, OptSpec, ParamConfig, SweepSpec, DEFAULT_DELTA_GRID, DEFAULT_SEED_COUNT};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigDocument {
    pub environment: EnvironmentSection,
    pub dynamics: DynamicsSection,
    pub regime: RegimeSection,
    pub engine: EngineSection,
    pub sweep: SweepSection,
    pub optimize: OptimizeSection,
}

/// Family arrays are ordered analytical, diagnostic, sequential, mixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvironmentSection {
    pub k: usize,
    pub family_weights: [f64; FAMILY_COUNT],
    pub phase3_weights: [f64; FAMILY_COUNT],
    pub novelty_weights: [f64; FAMILY_COUNT],
    pub base_difficulty: [f64; FAMILY_COUNT],
    pub requirement_min: f64,
    pub requirement_max: f64,
    pub difficulty_jitter: f64,
    pub epsilon_max: f64,
    pub lambda_m: f64,
    pub lambda_c: f64,
}

impl Default for EnvironmentSection {
    fn default() -> Self {
        let env = EnvSpec::default();
        EnvironmentSection {
            k: env.k,
            family_weights: DEFAULT_FAMILY_WEIGHTS,
            phase3_weights: DEFAULT_PHASE3_WEIGHTS,
            novelty_weights: DEFAULT_NOVELTY_WEIGHTS,
            base_difficulty: DEFAULT_BASE_DIFFICULTY,
            requirement_min: env.requirement_range.0,
            requirement_max: env.requirement_range.1,
            difficulty_jitter: env.difficulty_jitter,
            epsilon_max: env.epsilon_max,
            lambda_m: env.lambda_m,
            lambda_c: env.lambda_c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicsSection {
    pub alpha_self: f64,
    pub alpha_ai: f64,
    pub delta: f64,
    pub sensitivity: f64,
    pub w_effort: f64,
    pub eta_dep: f64,
    pub kappa_dep: f64,
    pub gamma_diff: f64,
    pub q_a: f64,
    pub atrophy_scope: AtrophyScope,
}

impl Default for DynamicsSection {
    fn default() -> Self {
        let d = DynamicsConfig::default();
        DynamicsSection {
            alpha_self: d.alpha_self,
            alpha_ai: d.alpha_ai,
            delta: d.delta,
            sensitivity: d.sensitivity,
            w_effort: d.w_effort,
            eta_dep: d.eta_dep,
            kappa_dep: d.kappa_dep,
            gamma_diff: d.gamma_diff,
            q_a: d.q_a,
            atrophy_scope: d.atrophy_scope,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegimeSection {
    pub mode: RegimeKind,
}

impl Default for RegimeSection {
    fn default() -> Self {
        RegimeSection { mode: RegimeKind::Mixed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineSection {
    pub n_agents: usize,
    pub phase_ticks: [u64; 3],
    pub eval_interval: u64,
    pub eval_tasks: usize,
    pub probe_tasks: usize,
    pub final_window_fraction: f64,
    /// Run seed for `run`; root seed for `sweep` and `optimize`.
    pub seed: u64,
}

impl Default for EngineSection {
    fn default() -> Self {
        let c = SimConfig::default();
        EngineSection {
            n_agents: c.n_agents,
            phase_ticks: c.phase_ticks,
            eval_interval: c.eval_interval,
            eval_tasks: c.eval_tasks,
            probe_tasks: c.probe_tasks,
            final_window_fraction: c.final_window_fraction,
            seed: c.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub regimes: Vec<RegimeKind>,
    /// Number of consecutive seeds starting at `engine.seed`.
    pub seeds: usize,
    pub configs: Vec<ParamConfig>,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            regimes: RegimeKind::ALL.to_vec(),
            seeds: DEFAULT_SEED_COUNT,
            configs: ParamConfig::standard(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeSection {
    pub delta_grid: Vec<f64>,
    pub seeds: usize,
}

impl Default for OptimizeSection {
    fn default() -> Self {
        OptimizeSection {
            delta_grid: DEFAULT_DELTA_GRID.to_vec(),
            seeds: DEFAULT_SEED_COUNT,
        }
    }
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// The fully expanded document, as stored in bundles.
    pub fn snapshot(&self) -> String {
        toml::to_string(self).expect("config document always serializes")
    }

    /// Desk-scale settings: five seeds and half-length phases.
    pub fn apply_fast(&mut self) {
        self.sweep.seeds = self.sweep.seeds.min(5);
        self.optimize.seeds = self.optimize.seeds.min(5);
        for t in &mut self.engine.phase_ticks {
            *t = (*t / 2).max(1);
        }
    }

    pub fn sim_config(&self) -> Result<SimConfig, CliError> {
        let e = &self.environment;
        if e.k == 0 {
            return Err(CliError::Config("environment.k: must be positive".into()));
        }
        let mut env = EnvSpec::with_dimensions(e.k);
        env.family_weights = e.family_weights;
        for (family, &c) in env.families.iter_mut().zip(&e.base_difficulty) {
            family.base_difficulty = c;
        }
        env.requirement_range = (e.requirement_min, e.requirement_max);
        env.difficulty_jitter = e.difficulty_jitter;
        env.epsilon_max = e.epsilon_max;
        env.lambda_m = e.lambda_m;
        env.lambda_c = e.lambda_c;

        let d = &self.dynamics;
        let g = &self.engine;
        let config = SimConfig {
            env,
            phase3_weights: e.phase3_weights,
            novelty_weights: e.novelty_weights,
            dynamics: DynamicsConfig {
                alpha_self: d.alpha_self,
                alpha_ai: d.alpha_ai,
                delta: d.delta,
                sensitivity: d.sensitivity,
                w_effort: d.w_effort,
                eta_dep: d.eta_dep,
                kappa_dep: d.kappa_dep,
                gamma_diff: d.gamma_diff,
                q_a: d.q_a,
                atrophy_scope: d.atrophy_scope,
            },
            regime: RegimeSpec::new(self.regime.mode),
            n_agents: g.n_agents,
            phase_ticks: g.phase_ticks,
            eval_interval: g.eval_interval,
            eval_tasks: g.eval_tasks,
            probe_tasks: g.probe_tasks,
            final_window_fraction: g.final_window_fraction,
            seed: g.seed,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec, CliError> {
        let s = &self.sweep;
        if s.seeds == 0 {
            return Err(CliError::Config("sweep.seeds: must be positive".into()));
        }
        if s.regimes.is_empty() {
            return Err(CliError::Config("sweep.regimes: must not be empty".into()));
        }
        if s.configs.is_empty() {
            return Err(CliError::Config("sweep.configs: must not be empty".into()));
        }
        let base = self.sim_config()?;
        for pc in &s.configs {
            let mut probe = base.dynamics.clone();
            probe.sensitivity = pc.sensitivity;
            probe.delta = pc.delta;
            probe
                .validate()
                .map_err(|e| CliError::Config(format!("sweep.configs `{}`: {e}", pc.label)))?;
        }
        Ok(SweepSpec {
            seeds: consecutive_seeds(base.seed, s.seeds),
            base,
            regimes: s.regimes.clone(),
            configs: s.configs.clone(),
        })
    }

    pub fn opt_spec(&self) -> Result<OptSpec, CliError> {
        let o = &self.optimize;
        if o.seeds == 0 {
            return Err(CliError::Config("optimize.seeds: must be positive".into()));
        }
        if o.delta_grid.is_empty() {
            return Err(CliError::Config("optimize.delta_grid: must not be empty".into()));
        }
        let mut base = self.sim_config()?;
        base.regime = RegimeSpec::new(RegimeKind::Mixed);
        Ok(OptSpec {
            seeds: consecutive_seeds(base.seed, o.seeds),
            base,
            delta_grid: o.delta_grid.clone(),
        })
    }
}
