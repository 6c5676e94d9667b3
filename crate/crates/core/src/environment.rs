//! Task generation: family-structured requirement vectors, difficulty
//! sampling and perturbation, task-skill mismatch and effort.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FAMILY_COUNT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    Analytical,
    Diagnostic,
    Sequential,
    Mixed,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; FAMILY_COUNT] = [
        FamilyKind::Analytical,
        FamilyKind::Diagnostic,
        FamilyKind::Sequential,
        FamilyKind::Mixed,
    ];
}

/// Which skill dimensions a family exercises.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ActivationMask {
    Fixed(Vec<usize>),
    /// A fresh uniformly drawn subset of this size for every task.
    RandomSubset(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskFamily {
    pub kind: FamilyKind,
    pub mask: ActivationMask,
    pub base_difficulty: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Task {
    pub family: FamilyKind,
    /// Activated dimensions, ascending.
    pub active: Vec<usize>,
    /// Length `k`; zero outside `active`.
    pub requirements: Vec<f64>,
    pub nominal_difficulty: f64,
    pub perturbed_difficulty: f64,
}

impl Task {
    fn empty(k: usize) -> Self {
        Task {
            family: FamilyKind::Analytical,
            active: Vec::with_capacity(k),
            requirements: vec![0.0; k],
            nominal_difficulty: 0.0,
            perturbed_difficulty: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvSpec {
    pub k: usize,
    /// Indexed in `FamilyKind::ALL` order.
    pub families: [TaskFamily; FAMILY_COUNT],
    pub family_weights: [f64; FAMILY_COUNT],
    pub requirement_range: (f64, f64),
    pub difficulty_jitter: f64,
    pub epsilon_max: f64,
    pub lambda_m: f64,
    pub lambda_c: f64,
}

pub const DEFAULT_FAMILY_WEIGHTS: [f64; FAMILY_COUNT] = [0.30, 0.30, 0.30, 0.10];
pub const DEFAULT_PHASE3_WEIGHTS: [f64; FAMILY_COUNT] = [0.15, 0.15, 0.20, 0.50];
pub const DEFAULT_NOVELTY_WEIGHTS: [f64; FAMILY_COUNT] = [0.10, 0.10, 0.10, 0.70];
pub const DEFAULT_BASE_DIFFICULTY: [f64; FAMILY_COUNT] = [0.40, 0.50, 0.50, 0.70];

impl Default for EnvSpec {
    fn default() -> Self {
        EnvSpec::with_dimensions(6)
    }
}

impl EnvSpec {
    /// Default environment over `k` skill dimensions. The three single-domain
    /// families own consecutive thirds of the dimensions; mixed tasks draw
    /// `ceil(k / 2)` dimensions at random. For `k = 6` this gives
    /// {1,2}, {3,4}, {5,6} and a random 3-subset.
    pub fn with_dimensions(k: usize) -> Self {
        let cut1 = k / 3;
        let cut2 = 2 * k / 3;
        let ranges = [(0, cut1), (cut1, cut2), (cut2, k)];
        let fixed = |i: usize| ActivationMask::Fixed((ranges[i].0..ranges[i].1).collect());
        let families = [
            TaskFamily {
                kind: FamilyKind::Analytical,
                mask: fixed(0),
                base_difficulty: DEFAULT_BASE_DIFFICULTY[0],
            },
            TaskFamily {
                kind: FamilyKind::Diagnostic,
                mask: fixed(1),
                base_difficulty: DEFAULT_BASE_DIFFICULTY[1],
            },
            TaskFamily {
                kind: FamilyKind::Sequential,
                mask: fixed(2),
                base_difficulty: DEFAULT_BASE_DIFFICULTY[2],
            },
            TaskFamily {
                kind: FamilyKind::Mixed,
                mask: ActivationMask::RandomSubset(k.div_ceil(2)),
                base_difficulty: DEFAULT_BASE_DIFFICULTY[3],
            },
        ];
        EnvSpec {
            k,
            families,
            family_weights: DEFAULT_FAMILY_WEIGHTS,
            requirement_range: (0.3, 0.9),
            difficulty_jitter: 0.15,
            epsilon_max: 0.20,
            lambda_m: 1.0,
            lambda_c: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::config("environment.k", "must be positive"));
        }
        validate_weights(&self.family_weights)?;
        for fam in &self.families {
            let name = format!("{:?}", fam.kind);
            if !(0.0..=1.0).contains(&fam.base_difficulty) {
                return Err(Error::config(
                    "environment.base_difficulty",
                    format!("{name} difficulty {} outside [0, 1]", fam.base_difficulty),
                ));
            }
            match &fam.mask {
                ActivationMask::Fixed(dims) => {
                    if dims.is_empty() {
                        return Err(Error::config(
                            "environment.k",
                            format!("{name} family activates no dimension"),
                        ));
                    }
                    if dims.iter().any(|&j| j >= self.k) {
                        return Err(Error::config(
                            "environment.k",
                            format!("{name} mask refers past dimension {}", self.k),
                        ));
                    }
                }
                ActivationMask::RandomSubset(size) => {
                    if *size == 0 || *size > self.k {
                        return Err(Error::config(
                            "environment.k",
                            format!("{name} subset size {size} not in 1..={}", self.k),
                        ));
                    }
                }
            }
        }
        let (lo, hi) = self.requirement_range;
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(Error::config(
                "environment.requirement_range",
                format!("[{lo}, {hi}] is not an interval inside [0, 1]"),
            ));
        }
        unit_interval("environment.difficulty_jitter", self.difficulty_jitter)?;
        unit_interval("environment.epsilon_max", self.epsilon_max)?;
        if self.lambda_m.is_nan() || self.lambda_m <= 0.0 {
            return Err(Error::config("environment.lambda_m", "must be positive"));
        }
        if self.lambda_c.is_nan() || self.lambda_c <= 0.0 {
            return Err(Error::config("environment.lambda_c", "must be positive"));
        }
        Ok(())
    }

    pub fn family(&self, kind: FamilyKind) -> &TaskFamily {
        &self.families[kind as usize]
    }
}

fn unit_interval(field: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::config(field, format!("{v} is outside [0, 1]")))
    }
}

pub fn validate_weights(w: &[f64; FAMILY_COUNT]) -> Result<()> {
    if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(Error::InvalidWeights(format!("{w:?} has a negative entry")));
    }
    let sum: f64 = w.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidWeights(format!("{w:?} sums to {sum}")));
    }
    Ok(())
}

/// Copy of `env` with the family distribution replaced.
pub fn shifted_env(env: &EnvSpec, weights: [f64; FAMILY_COUNT]) -> Result<EnvSpec> {
    validate_weights(&weights)?;
    Ok(EnvSpec {
        family_weights: weights,
        ..env.clone()
    })
}

/// Distribution used by novelty probes: the analytical and sequential masks
/// trade places and the family weights are replaced.
pub fn novelty_env(env: &EnvSpec, weights: [f64; FAMILY_COUNT]) -> Result<EnvSpec> {
    let mut out = shifted_env(env, weights)?;
    let a = FamilyKind::Analytical as usize;
    let s = FamilyKind::Sequential as usize;
    let mask = out.families[a].mask.clone();
    out.families[a].mask = std::mem::replace(&mut out.families[s].mask, mask);
    Ok(out)
}

pub fn sample_task<R: Rng + ?Sized>(env: &EnvSpec, rng: &mut R) -> Task {
    let mut task = Task::empty(env.k);
    sample_task_into(env, rng, &mut task);
    task
}

/// Buffer-reusing form of [`sample_task`]. Draw order: family, mask (mixed
/// only), requirements, jitter, perturbation.
pub fn sample_task_into<R: Rng + ?Sized>(env: &EnvSpec, rng: &mut R, task: &mut Task) {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut idx = FAMILY_COUNT - 1;
    for (i, w) in env.family_weights.iter().enumerate() {
        acc += w;
        if u < acc {
            idx = i;
            break;
        }
    }
    // Guard against trailing zero weights absorbing the rounding remainder.
    while env.family_weights[idx] == 0.0 && idx > 0 {
        idx -= 1;
    }
    let family = &env.families[idx];
    task.family = family.kind;

    task.active.clear();
    match &family.mask {
        ActivationMask::Fixed(dims) => task.active.extend_from_slice(dims),
        ActivationMask::RandomSubset(size) => {
            task.active.extend(0..env.k);
            for i in 0..*size {
                let j = rng.gen_range(i..env.k);
                task.active.swap(i, j);
            }
            task.active.truncate(*size);
            task.active.sort_unstable();
        }
    }

    task.requirements.clear();
    task.requirements.resize(env.k, 0.0);
    let (lo, hi) = env.requirement_range;
    for &j in &task.active {
        task.requirements[j] = lo + (hi - lo) * rng.gen::<f64>();
    }

    let jitter = env.difficulty_jitter * (2.0 * rng.gen::<f64>() - 1.0);
    task.nominal_difficulty = (family.base_difficulty + jitter).clamp(0.0, 1.0);
    task.perturbed_difficulty = perturb(task.nominal_difficulty, env, rng);
}

/// Adds a one-sided uniform perturbation from `[0, epsilon_max]` and clamps
/// to 1. Always consumes exactly one draw.
pub fn perturb<R: Rng + ?Sized>(c: f64, env: &EnvSpec, rng: &mut R) -> f64 {
    let eps = env.epsilon_max * rng.gen::<f64>();
    (c + eps).clamp(0.0, 1.0)
}

/// Mean shortfall of skills below requirements over all `k` dimensions.
pub fn mismatch(skills: &[f64], task: &Task) -> Result<f64> {
    if skills.len() != task.requirements.len() {
        return Err(Error::DimensionMismatch {
            expected: task.requirements.len(),
            got: skills.len(),
        });
    }
    Ok(mismatch_unchecked(skills, &task.requirements))
}

#[inline]
pub(crate) fn mismatch_unchecked(skills: &[f64], requirements: &[f64]) -> f64 {
    let gap: f64 = requirements
        .iter()
        .zip(skills)
        .map(|(r, s)| (r - s).max(0.0))
        .sum();
    gap / requirements.len() as f64
}

pub fn effort(m: f64, c_tilde: f64, env: &EnvSpec) -> f64 {
    env.lambda_m * m + env.lambda_c * c_tilde
}
