//! The three-phase simulation loop.
//!
//! Phase 1 runs without AI, phase 2 makes AI available under the configured
//! reliance regime, and phase 3 keeps AI available while the task stream
//! shifts toward composite families. During phases 2 and 3 an evaluation
//! sample is taken every `eval_interval` ticks: an AI-off evaluation, a
//! perturbation probe, a novelty probe, and the running hybrid aggregates.
//!
//! AI-off evaluations and perturbation probes use a fixed battery of tasks
//! drawn from the familiar (phase 1/2) distribution, regenerated from the same
//! seed at every sample. Differences between samples therefore reflect skill
//! change only, not a different draw of exam questions. Novelty probes use
//! their own fixed battery from the novelty distribution.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agents::{
    atrophy_unchecked, decide_ai_use, init_population, learn_unchecked, perform_hybrid,
    perform_self_unchecked, update_dependency, AgentState, DynamicsConfig, RegimeKind, RegimeSpec,
};
use crate::environment::{
    effort, mismatch_unchecked, novelty_env, sample_task_into, shifted_env, EnvSpec, Task,
    DEFAULT_NOVELTY_WEIGHTS, DEFAULT_PHASE3_WEIGHTS, FAMILY_COUNT,
};
use crate::error::{Error, Result};
use crate::metrics::{classify_regime, hcdr, MetricSet, PerformanceTriple, RegimeLabel};
use crate::seeding;

const EVAL_STREAM: u64 = 0xE7A1;
const NOVELTY_STREAM: u64 = 0x70E1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub env: EnvSpec,
    pub phase3_weights: [f64; FAMILY_COUNT],
    pub novelty_weights: [f64; FAMILY_COUNT],
    pub dynamics: DynamicsConfig,
    pub regime: RegimeSpec,
    pub n_agents: usize,
    pub phase_ticks: [u64; 3],
    pub eval_interval: u64,
    pub eval_tasks: usize,
    pub probe_tasks: usize,
    pub final_window_fraction: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            env: EnvSpec::default(),
            phase3_weights: DEFAULT_PHASE3_WEIGHTS,
            novelty_weights: DEFAULT_NOVELTY_WEIGHTS,
            dynamics: DynamicsConfig::default(),
            regime: RegimeSpec::new(RegimeKind::Mixed),
            n_agents: 1000,
            phase_ticks: [500, 2000, 500],
            eval_interval: 100,
            eval_tasks: 50,
            probe_tasks: 50,
            final_window_fraction: 0.2,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.env.validate()?;
        self.dynamics.validate()?;
        shifted_env(&self.env, self.phase3_weights).map_err(|e| Error::config("environment.phase3_weights", e.to_string()))?;
        novelty_env(&self.env, self.novelty_weights).map_err(|e| Error::config("environment.novelty_weights", e.to_string()))?;
        if self.regime != RegimeSpec::new(self.regime.name) {
            return Err(Error::config(
                "regime.p_base",
                format!("{} is not the base probability of {}", self.regime.p_base, self.regime.name),
            ));
        }
        let positive = [
            ("engine.n_agents", self.n_agents as u64),
            ("engine.eval_interval", self.eval_interval),
            ("engine.eval_tasks", self.eval_tasks as u64),
            ("engine.probe_tasks", self.probe_tasks as u64),
        ];
        for (field, v) in positive {
            if v == 0 {
                return Err(Error::config(field, "must be positive"));
            }
        }
        if self.phase_ticks.contains(&0) {
            return Err(Error::config("engine.phase_ticks", "every phase needs at least one tick"));
        }
        if !(self.final_window_fraction > 0.0 && self.final_window_fraction <= 1.0) {
            return Err(Error::config(
                "engine.final_window_fraction",
                format!("{} is outside (0, 1]", self.final_window_fraction),
            ));
        }
        let assisted = self.phase_ticks[1] + self.phase_ticks[2];
        if assisted / self.eval_interval < 2 {
            return Err(Error::config(
                "engine.eval_interval",
                format!("phases 2 and 3 ({assisted} ticks) must hold at least two evaluation samples"),
            ));
        }
        Ok(())
    }

    pub fn total_ticks(&self) -> u64 {
        self.phase_ticks.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalSample {
    pub time: u64,
    pub q_h: f64,
    pub q_h_pert: f64,
    pub q_h_novel: f64,
    pub q_ha: f64,
    pub ai_use_rate: f64,
    pub skill_mean: f64,
    pub dependency_mean: f64,
}

pub const SAMPLE_CSV_COLUMNS: [&str; 8] = [
    "time",
    "q_h",
    "q_h_pert",
    "q_h_novel",
    "q_ha",
    "ai_use_rate",
    "skill_mean",
    "dependency_mean",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub q_h: f64,
    pub q_ha: f64,
    pub skill_mean: f64,
    pub ai_use_rate: f64,
    pub q_h_pert: f64,
    pub q_h_novel: f64,
    pub dependency_mean: f64,
    pub metrics: MetricSet,
    pub regime_label: RegimeLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub samples: Vec<EvalSample>,
    pub summary: RunSummary,
}

/// Aggregates of one tick of normal operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TickRecord {
    pub score_sum: f64,
    pub ai_uses: u64,
    pub tasks: u64,
}

impl TickRecord {
    pub fn mean_score(&self) -> f64 {
        self.score_sum / self.tasks as f64
    }

    pub fn ai_use_fraction(&self) -> f64 {
        self.ai_uses as f64 / self.tasks as f64
    }
}

/// Mutable state of one run.
#[derive(Debug, Clone)]
pub struct World {
    pub agents: Vec<AgentState>,
    pub dynamics: DynamicsConfig,
    pub regime: RegimeSpec,
    scratch: Task,
}

impl World {
    pub fn new(agents: Vec<AgentState>, dynamics: DynamicsConfig, regime: RegimeSpec) -> Self {
        let k = agents.first().map_or(0, |a| a.skills.len());
        World {
            agents,
            dynamics,
            regime,
            scratch: Task {
                family: crate::environment::FamilyKind::Analytical,
                active: Vec::with_capacity(k),
                requirements: vec![0.0; k],
                nominal_difficulty: 0.0,
                perturbed_difficulty: 0.0,
            },
        }
    }

    pub fn mean_skill(&self) -> f64 {
        let n = self.agents.len() as f64;
        self.agents.iter().map(AgentState::mean_skill).sum::<f64>() / n
    }

    pub fn mean_dependency(&self) -> f64 {
        let n = self.agents.len() as f64;
        self.agents.iter().map(|a| a.dependency).sum::<f64>() / n
    }

    /// Hash of every agent's bit-level state.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        for a in &self.agents {
            for s in &a.skills {
                s.to_bits().hash(&mut h);
            }
            a.dependency.to_bits().hash(&mut h);
            a.ai_use_count.hash(&mut h);
            a.task_count.hash(&mut h);
        }
        h.finish()
    }
}

/// Advances every agent by one task.
pub fn step(world: &mut World, ai_available: bool, env_now: &EnvSpec, rng: &mut ChaCha8Rng) -> TickRecord {
    let World {
        agents,
        dynamics: cfg,
        regime,
        scratch: task,
    } = world;
    let mut rec = TickRecord {
        score_sum: 0.0,
        ai_uses: 0,
        tasks: 0,
    };
    for agent in agents.iter_mut() {
        sample_task_into(env_now, rng, task);
        let m = mismatch_unchecked(&agent.skills, &task.requirements);
        let e = effort(m, task.perturbed_difficulty, env_now);
        let used_ai = decide_ai_use(agent, e, regime, cfg, ai_available, rng);
        let score = if used_ai {
            perform_hybrid(cfg)
        } else {
            perform_self_unchecked(&agent.skills, task, cfg.gamma_diff)
        };
        if used_ai {
            learn_unchecked(&mut agent.skills, task, cfg.alpha_ai);
            atrophy_unchecked(&mut agent.skills, task, cfg.delta, cfg.atrophy_scope);
            agent.ai_use_count += 1;
            rec.ai_uses += 1;
        } else {
            learn_unchecked(&mut agent.skills, task, cfg.alpha_self);
        }
        agent.dependency = update_dependency(agent.dependency, used_ai, cfg);
        agent.task_count += 1;
        rec.score_sum += score;
        rec.tasks += 1;
    }
    rec
}

/// Population mean of unaided scores on `n_tasks` fresh tasks per agent.
/// Reads the world only.
pub fn ai_off_eval(world: &World, env_now: &EnvSpec, n_tasks: usize, rng: &mut ChaCha8Rng) -> f64 {
    let mut task = world.scratch.clone();
    let gamma = world.dynamics.gamma_diff;
    let mut sum = 0.0;
    for agent in &world.agents {
        for _ in 0..n_tasks {
            sample_task_into(env_now, rng, &mut task);
            sum += perform_self_unchecked(&agent.skills, &task, gamma);
        }
    }
    sum / (world.agents.len() * n_tasks) as f64
}

/// AI-off evaluation with the perturbation bound doubled (capped at 1).
pub fn perturbation_probe(world: &World, env_now: &EnvSpec, n_tasks: usize, rng: &mut ChaCha8Rng) -> f64 {
    let env = EnvSpec {
        epsilon_max: (2.0 * env_now.epsilon_max).min(1.0),
        ..env_now.clone()
    };
    ai_off_eval(world, &env, n_tasks, rng)
}

/// AI-off evaluation on the novelty distribution.
pub fn novelty_probe(world: &World, env_novel: &EnvSpec, n_tasks: usize, rng: &mut ChaCha8Rng) -> f64 {
    ai_off_eval(world, env_novel, n_tasks, rng)
}

/// Runs all three phases for one configuration and seed.
pub fn run(config: &SimConfig) -> Result<RunResult> {
    config.validate()?;
    let base_env = &config.env;
    let phase3_env = shifted_env(base_env, config.phase3_weights)?;
    let novel_env = novelty_env(base_env, config.novelty_weights)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let agents = init_population(config.n_agents, base_env.k, &mut rng);
    let mut world = World::new(agents, config.dynamics.clone(), config.regime);
    let eval_seed = seeding::combine(config.seed, &[EVAL_STREAM]);
    let novelty_seed = seeding::combine(config.seed, &[NOVELTY_STREAM]);

    let [p1, p2, _] = config.phase_ticks;
    let total = config.total_ticks();
    let mut samples = Vec::with_capacity(((total - p1) / config.eval_interval) as usize);
    let mut window = TickRecord {
        score_sum: 0.0,
        ai_uses: 0,
        tasks: 0,
    };

    for tick in 0..total {
        let assisted = tick >= p1;
        let env_now = if tick >= p1 + p2 { &phase3_env } else { base_env };
        let rec = step(&mut world, assisted, env_now, &mut rng);
        if !assisted {
            continue;
        }
        window.score_sum += rec.score_sum;
        window.ai_uses += rec.ai_uses;
        window.tasks += rec.tasks;

        let time = tick + 1;
        if (time - p1) % config.eval_interval == 0 {
            let q_h = ai_off_eval(&world, base_env, config.eval_tasks, &mut ChaCha8Rng::seed_from_u64(eval_seed));
            let q_h_pert =
                perturbation_probe(&world, base_env, config.probe_tasks, &mut ChaCha8Rng::seed_from_u64(eval_seed));
            let q_h_novel =
                novelty_probe(&world, &novel_env, config.probe_tasks, &mut ChaCha8Rng::seed_from_u64(novelty_seed));
            samples.push(EvalSample {
                time,
                q_h,
                q_h_pert,
                q_h_novel,
                q_ha: window.mean_score(),
                ai_use_rate: window.ai_use_fraction(),
                skill_mean: world.mean_skill(),
                dependency_mean: world.mean_dependency(),
            });
            window = TickRecord {
                score_sum: 0.0,
                ai_uses: 0,
                tasks: 0,
            };
        }
    }

    let summary = summarize(&samples, config)?;
    Ok(RunResult { samples, summary })
}

/// Number of trailing samples in the final window.
pub fn final_window_len(n: usize, fraction: f64) -> usize {
    // the epsilon absorbs representation error such as 25 * 0.2 > 5
    (((n as f64) * fraction - 1e-9).ceil() as usize).clamp(1, n.max(1))
}

/// Final-window means plus metrics; HCDR uses the whole series.
pub fn summarize(samples: &[EvalSample], config: &SimConfig) -> Result<RunSummary> {
    if samples.len() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    let w = final_window_len(samples.len(), config.final_window_fraction);
    let tail = &samples[samples.len() - w..];
    let mean = |f: fn(&EvalSample) -> f64| {
        let first = f(&tail[0]);
        if tail.iter().all(|s| f(s).to_bits() == first.to_bits()) {
            first
        } else {
            tail.iter().map(f).sum::<f64>() / w as f64
        }
    };

    let q_h = mean(|s| s.q_h);
    let q_ha = mean(|s| s.q_ha);
    let series: Vec<(f64, f64)> = samples.iter().map(|s| (s.time as f64, s.q_h)).collect();
    let triple = PerformanceTriple {
        q_h,
        q_a: config.dynamics.q_a,
        q_ha,
    };
    let metrics = MetricSet::from_triple(&triple, hcdr(&series)?)?;
    Ok(RunSummary {
        q_h,
        q_ha,
        skill_mean: mean(|s| s.skill_mean),
        ai_use_rate: mean(|s| s.ai_use_rate),
        q_h_pert: mean(|s| s.q_h_pert),
        q_h_novel: mean(|s| s.q_h_novel),
        dependency_mean: mean(|s| s.dependency_mean),
        regime_label: classify_regime(&metrics),
        metrics,
    })
}

/// Writes the sample series as CSV with six decimals.
pub fn write_samples_csv<W: Write>(samples: &[EvalSample], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SAMPLE_CSV_COLUMNS)?;
    for s in samples {
        w.write_record([
            s.time.to_string(),
            format!("{:.6}", s.q_h),
            format!("{:.6}", s.q_h_pert),
            format!("{:.6}", s.q_h_novel),
            format!("{:.6}", s.q_ha),
            format!("{:.6}", s.ai_use_rate),
            format!("{:.6}", s.skill_mean),
            format!("{:.6}", s.dependency_mean),
        ])?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::ActivationMask;

    fn small(regime: RegimeKind, seed: u64) -> SimConfig {
        SimConfig {
            regime: RegimeSpec::new(regime),
            n_agents: 60,
            phase_ticks: [100, 400, 100],
            eval_interval: 50,
            eval_tasks: 10,
            probe_tasks: 10,
            seed,
            ..SimConfig::default()
        }
    }

    fn world(regime: RegimeKind, n: usize, seed: u64) -> (World, ChaCha8Rng) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let agents = init_population(n, 6, &mut rng);
        (World::new(agents, DynamicsConfig::default(), RegimeSpec::new(regime)), rng)
    }

    #[test]
    fn step_regime_contracts() {
        let env = EnvSpec::default();
        let (mut w, mut rng) = world(RegimeKind::MinimalAi, 50, 1);
        for _ in 0..20 {
            assert_eq!(step(&mut w, true, &env, &mut rng).ai_use_fraction(), 0.0);
        }
        assert!(w.agents.iter().all(|a| a.ai_use_count == 0 && a.task_count == 20));

        let (mut w, mut rng) = world(RegimeKind::FullDelegation, 50, 1);
        for _ in 0..20 {
            let rec = step(&mut w, true, &env, &mut rng);
            assert_eq!(rec.mean_score(), 1.0);
            assert_eq!(rec.ai_use_fraction(), 1.0);
        }
        assert!(w.agents.iter().all(|a| a.ai_use_count == a.task_count));

        // AI unavailable overrides the regime
        let rec = step(&mut w, false, &env, &mut rng);
        assert_eq!(rec.ai_uses, 0);
    }

    #[test]
    fn step_is_deterministic() {
        let env = EnvSpec::default();
        let records = |seed| {
            let (mut w, mut rng) = world(RegimeKind::Mixed, 40, seed);
            (0..50).map(|_| step(&mut w, true, &env, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(records(5), records(5));
        assert_ne!(records(5), records(6));
    }

    #[test]
    fn phase_one_skill_is_nondecreasing() {
        let env = EnvSpec::default();
        let (mut w, mut rng) = world(RegimeKind::FullDelegation, 100, 2);
        let mut prev = w.mean_skill();
        for _ in 0..300 {
            step(&mut w, false, &env, &mut rng);
            let now = w.mean_skill();
            assert!(now >= prev);
            prev = now;
        }
    }

    #[test]
    fn ai_off_eval_ceiling_and_purity() {
        let mut env = EnvSpec::default();
        for f in env.families.iter_mut() {
            f.base_difficulty = 0.0;
        }
        env.difficulty_jitter = 0.0;
        env.epsilon_max = 0.0;
        let agents = vec![AgentState::new(vec![1.0; 6]); 20];
        let w = World::new(agents, DynamicsConfig::default(), RegimeSpec::new(RegimeKind::Mixed));
        let before = w.fingerprint();
        assert_eq!(ai_off_eval(&w, &env, 10, &mut ChaCha8Rng::seed_from_u64(0)), 1.0);
        assert_eq!(w.fingerprint(), before);
    }

    #[test]
    fn ai_off_eval_closed_form_on_collapsed_env() {
        let mut env = EnvSpec::default();
        env.family_weights = [0.0, 1.0, 0.0, 0.0];
        env.requirement_range = (0.6, 0.6);
        env.difficulty_jitter = 0.0;
        env.epsilon_max = 0.0;
        let agents = vec![AgentState::new(vec![0.0; 6]); 10];
        let cfg = DynamicsConfig::default();
        let w = World::new(agents, cfg.clone(), RegimeSpec::new(RegimeKind::Mixed));
        // two active dims at r = 0.6 over k = 6, difficulty 0.5
        let m = 2.0 * 0.6 / 6.0;
        let expected = (1.0 - m) * (1.0 - cfg.gamma_diff * 0.5);
        let got = ai_off_eval(&w, &env, 5, &mut ChaCha8Rng::seed_from_u64(3));
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn perturbation_probe_never_beats_paired_eval() {
        let env = EnvSpec::default();
        let (mut w, mut rng) = world(RegimeKind::Mixed, 200, 8);
        for _ in 0..50 {
            step(&mut w, true, &env, &mut rng);
        }
        let before = w.fingerprint();
        let base = ai_off_eval(&w, &env, 20, &mut ChaCha8Rng::seed_from_u64(77));
        let pert = perturbation_probe(&w, &env, 20, &mut ChaCha8Rng::seed_from_u64(77));
        assert!(pert <= base);
        assert_eq!(w.fingerprint(), before);

        let mut flat = env.clone();
        flat.epsilon_max = 0.0;
        let a = ai_off_eval(&w, &flat, 20, &mut ChaCha8Rng::seed_from_u64(9));
        let b = perturbation_probe(&w, &flat, 20, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }

    #[test]
    fn novelty_probe_matches_eval_when_distribution_unchanged() {
        let env = EnvSpec::default();
        let (w, _) = world(RegimeKind::Mixed, 50, 4);
        let before = w.fingerprint();
        let a = ai_off_eval(&w, &env, 10, &mut ChaCha8Rng::seed_from_u64(1));
        let b = novelty_probe(&w, &env, 10, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a, b);
        assert_eq!(w.fingerprint(), before);
    }

    #[test]
    fn novelty_after_full_delegation_is_not_better() {
        let mut cfg = small(RegimeKind::FullDelegation, 3);
        cfg.n_agents = 200;
        let r = run(&cfg).unwrap();
        let s = &r.summary;
        // atrophied agents generalize no better than they perform on familiar tasks
        assert!(s.q_h_novel <= s.q_h + 0.01, "{} vs {}", s.q_h_novel, s.q_h);
    }

    #[test]
    fn run_produces_expected_sample_grid() {
        let r = run(&small(RegimeKind::Mixed, 1)).unwrap();
        let times: Vec<u64> = r.samples.iter().map(|s| s.time).collect();
        assert_eq!(times, (1..=10).map(|i| 100 + 50 * i).collect::<Vec<_>>());
        for s in &r.samples {
            for v in [s.q_h, s.q_h_pert, s.q_h_novel, s.q_ha, s.ai_use_rate, s.skill_mean, s.dependency_mean] {
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn full_delegation_metrics_are_forced() {
        let r = run(&small(RegimeKind::FullDelegation, 2)).unwrap();
        let m = r.summary.metrics;
        assert_eq!((m.cai_star, m.d, m.hri), (0.0, 1.0, 0.0));
        assert_eq!(r.summary.ai_use_rate, 1.0);
        let first = r.samples.first().unwrap().skill_mean;
        assert!(r.summary.skill_mean < first);
    }

    #[test]
    fn minimal_ai_hybrid_equals_unaided_without_shift() {
        let mut cfg = small(RegimeKind::MinimalAi, 4);
        cfg.n_agents = 300;
        cfg.phase3_weights = cfg.env.family_weights;
        let r = run(&cfg).unwrap();
        let s = &r.summary;
        assert_eq!(s.ai_use_rate, 0.0);
        assert!((s.q_ha - s.q_h).abs() < 0.01, "{} vs {}", s.q_ha, s.q_h);
        assert!(s.metrics.d > 1.0);
    }

    #[test]
    fn zero_atrophy_never_drifts_down() {
        let mut cfg = small(RegimeKind::Mixed, 5);
        cfg.dynamics.delta = 0.0;
        let r = run(&cfg).unwrap();
        assert!(r.samples.windows(2).all(|w| w[1].q_h >= w[0].q_h));
        assert!(r.summary.metrics.hcdr >= 0.0);
    }

    #[test]
    fn run_is_deterministic() {
        let cfg = small(RegimeKind::Mixed, 11);
        assert_eq!(run(&cfg).unwrap(), run(&cfg).unwrap());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut cfg = small(RegimeKind::Mixed, 0);
        cfg.final_window_fraction = 0.0;
        assert!(run(&cfg).is_err());
        let mut cfg = small(RegimeKind::Mixed, 0);
        cfg.eval_interval = 400;
        assert!(run(&cfg).is_err());
        let mut cfg = small(RegimeKind::Mixed, 0);
        cfg.regime.p_base = 0.7;
        assert!(run(&cfg).is_err());
        let mut cfg = small(RegimeKind::Mixed, 0);
        cfg.env.families[3].mask = ActivationMask::RandomSubset(9);
        assert!(run(&cfg).is_err());
    }

    fn sample(time: u64, v: f64) -> EvalSample {
        EvalSample {
            time,
            q_h: v,
            q_h_pert: v,
            q_h_novel: v,
            q_ha: v,
            ai_use_rate: 0.5,
            skill_mean: v,
            dependency_mean: 0.2,
        }
    }

    #[test]
    fn summarize_examples() {
        let cfg = SimConfig {
            final_window_fraction: 1.0,
            ..SimConfig::default()
        };
        let flat: Vec<_> = (1..=6).map(|i| sample(100 * i, 0.7)).collect();
        let s = summarize(&flat, &cfg).unwrap();
        assert_eq!((s.q_h, s.ai_use_rate, s.metrics.hcdr), (0.7, 0.5, 0.0));

        let two = [sample(100, 0.60), sample(200, 0.58)];
        let s = summarize(&two, &cfg).unwrap();
        assert!((s.metrics.hcdr + 0.0002).abs() < 1e-15);
        assert!((s.q_h - 0.59).abs() < 1e-15);

        assert!(summarize(&two[..1], &cfg).is_err());
    }

    #[test]
    fn final_window_sizes() {
        assert_eq!(final_window_len(25, 0.2), 5);
        assert_eq!(final_window_len(12, 0.2), 3);
        assert_eq!(final_window_len(3, 0.01), 1);
        assert_eq!(final_window_len(10, 1.0), 10);
    }

    #[test]
    fn samples_csv_layout() {
        let mut buf = Vec::new();
        write_samples_csv(&[sample(100, 0.5)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "time,q_h,q_h_pert,q_h_novel,q_ha,ai_use_rate,skill_mean,dependency_mean"
        );
        assert_eq!(
            lines.next().unwrap(),
            "100,0.500000,0.500000,0.500000,0.500000,0.500000,0.500000,0.200000"
        );
    }
}
