//! Per-agent state and micro-dynamics: AI-use decisions with dependency
//! feedback, learning, atrophy, dependency evolution and task scoring.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::environment::{mismatch_unchecked, Task};
use crate::error::{Error, Result};

pub const INITIAL_SKILL_RANGE: (f64, f64) = (0.25, 0.55);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub skills: Vec<f64>,
    pub dependency: f64,
    pub ai_use_count: u64,
    pub task_count: u64,
}

impl AgentState {
    pub fn new(skills: Vec<f64>) -> Self {
        AgentState {
            skills,
            dependency: 0.0,
            ai_use_count: 0,
            task_count: 0,
        }
    }

    pub fn mean_skill(&self) -> f64 {
        self.skills.iter().sum::<f64>() / self.skills.len() as f64
    }
}

/// Which skill dimensions decay when a task is delegated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtrophyScope {
    /// Only the task's activated dimensions.
    #[default]
    Active,
    /// Every dimension.
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
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

impl Default for DynamicsConfig {
    fn default() -> Self {
        DynamicsConfig {
            alpha_self: 0.05,
            alpha_ai: 0.00105,
            delta: 0.002,
            sensitivity: 0.4,
            w_effort: 0.3,
            eta_dep: 0.05,
            kappa_dep: 0.01,
            gamma_diff: 0.3,
            q_a: 1.0,
            atrophy_scope: AtrophyScope::Active,
        }
    }
}

impl DynamicsConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = [
            ("dynamics.alpha_self", self.alpha_self),
            ("dynamics.alpha_ai", self.alpha_ai),
            ("dynamics.delta", self.delta),
            ("dynamics.eta_dep", self.eta_dep),
            ("dynamics.kappa_dep", self.kappa_dep),
            ("dynamics.gamma_diff", self.gamma_diff),
            ("dynamics.q_a", self.q_a),
        ];
        for (field, v) in unit {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::config(field, format!("{v} is outside [0, 1]")));
            }
        }
        for (field, v) in [
            ("dynamics.sensitivity", self.sensitivity),
            ("dynamics.w_effort", self.w_effort),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::config(field, format!("{v} must be nonnegative")));
            }
        }
        if !(self.alpha_ai > 0.0 && self.alpha_ai < self.alpha_self) {
            return Err(Error::config(
                "dynamics.alpha_ai",
                format!(
                    "{} must satisfy 0 < alpha_ai < alpha_self = {}",
                    self.alpha_ai, self.alpha_self
                ),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    FullDelegation,
    MinimalAi,
    Mixed,
}

impl RegimeKind {
    pub const ALL: [RegimeKind; 3] = [
        RegimeKind::FullDelegation,
        RegimeKind::MinimalAi,
        RegimeKind::Mixed,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeKind::FullDelegation => "full_delegation",
            RegimeKind::MinimalAi => "minimal_ai",
            RegimeKind::Mixed => "mixed",
        }
    }
}

impl std::fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RegimeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RegimeKind::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| {
                Error::config(
                    "regime.mode",
                    format!("unknown regime `{s}` (full_delegation, minimal_ai, mixed)"),
                )
            })
    }
}

/// A reliance regime. The base probability is tied to the kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeSpec {
    pub name: RegimeKind,
    pub p_base: f64,
}

impl RegimeSpec {
    pub fn new(name: RegimeKind) -> Self {
        let p_base = match name {
            RegimeKind::FullDelegation => 1.0,
            RegimeKind::MinimalAi => 0.0,
            RegimeKind::Mixed => 0.5,
        };
        RegimeSpec { name, p_base }
    }
}

impl From<RegimeKind> for RegimeSpec {
    fn from(kind: RegimeKind) -> Self {
        RegimeSpec::new(kind)
    }
}

pub fn init_population<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<AgentState> {
    let (lo, hi) = INITIAL_SKILL_RANGE;
    (0..n)
        .map(|_| AgentState::new((0..k).map(|_| lo + (hi - lo) * rng.gen::<f64>()).collect()))
        .collect()
}

/// `clamp01(p_base * (1 + sensitivity * dependency + w_effort * min(effort, 1)))`.
pub fn ai_use_probability(dependency: f64, effort: f64, regime: &RegimeSpec, cfg: &DynamicsConfig) -> f64 {
    let lift = 1.0 + cfg.sensitivity * dependency + cfg.w_effort * effort.min(1.0);
    (regime.p_base * lift).clamp(0.0, 1.0)
}

/// Draws the AI-use decision. Consumes exactly one draw whenever AI is
/// available, so streams stay aligned across regimes.
pub fn decide_ai_use<R: Rng + ?Sized>(
    agent: &AgentState,
    effort: f64,
    regime: &RegimeSpec,
    cfg: &DynamicsConfig,
    ai_available: bool,
    rng: &mut R,
) -> bool {
    if !ai_available {
        return false;
    }
    let p = ai_use_probability(agent.dependency, effort, regime, cfg);
    rng.gen::<f64>() < p
}

/// Saturating skill growth on the task's activated dimensions:
/// `s += rate * (1 - s) * r`.
pub fn learn(skills: &mut [f64], task: &Task, rate: f64) -> Result<()> {
    check_dims(skills, task)?;
    learn_unchecked(skills, task, rate);
    Ok(())
}

#[inline]
pub(crate) fn learn_unchecked(skills: &mut [f64], task: &Task, rate: f64) {
    for &j in &task.active {
        let s = skills[j];
        skills[j] = s + rate * (1.0 - s) * task.requirements[j];
    }
}

/// Multiplicative decay `s *= 1 - delta` on the task's activated dimensions.
pub fn atrophy(skills: &mut [f64], task: &Task, delta: f64) -> Result<()> {
    check_dims(skills, task)?;
    atrophy_unchecked(skills, task, delta, AtrophyScope::Active);
    Ok(())
}

#[inline]
pub(crate) fn atrophy_unchecked(skills: &mut [f64], task: &Task, delta: f64, scope: AtrophyScope) {
    let keep = 1.0 - delta;
    match scope {
        AtrophyScope::Active => {
            for &j in &task.active {
                skills[j] *= keep;
            }
        }
        AtrophyScope::All => skills.iter_mut().for_each(|s| *s *= keep),
    }
}

fn check_dims(skills: &[f64], task: &Task) -> Result<()> {
    if skills.len() != task.requirements.len() {
        return Err(Error::DimensionMismatch {
            expected: task.requirements.len(),
            got: skills.len(),
        });
    }
    Ok(())
}

pub fn update_dependency(d: f64, used_ai: bool, cfg: &DynamicsConfig) -> f64 {
    let next = if used_ai {
        d + cfg.eta_dep * (1.0 - d)
    } else {
        d * (1.0 - cfg.kappa_dep)
    };
    next.clamp(0.0, 1.0)
}

/// Unaided score: `(1 - mismatch) * (1 - gamma_diff * perturbed_difficulty)`.
pub fn perform_self(skills: &[f64], task: &Task, cfg: &DynamicsConfig) -> Result<f64> {
    check_dims(skills, task)?;
    Ok(perform_self_unchecked(skills, task, cfg.gamma_diff))
}

#[inline]
pub(crate) fn perform_self_unchecked(skills: &[f64], task: &Task, gamma_diff: f64) -> f64 {
    let m = mismatch_unchecked(skills, &task.requirements);
    ((1.0 - m) * (1.0 - gamma_diff * task.perturbed_difficulty)).clamp(0.0, 1.0)
}

/// AI-assisted score: the fixed AI reliability.
pub fn perform_hybrid(cfg: &DynamicsConfig) -> f64 {
    cfg.q_a
}
