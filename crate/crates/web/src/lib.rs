//! WebAssembly bindings for the browser demo. Every export returns a JSON
//! string; the plain functions underneath are usable natively as well.

use amplify_core::agents::RegimeKind;
use amplify_core::engine::{run, EvalSample, RunSummary, SimConfig};
use amplify_core::lab::{optimize_atrophy, OptResult, OptSpec};
use amplify_core::metrics::{classify_regime, MetricSet, PerformanceTriple, RegimeLabel};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct MetricsView {
    pub metrics: MetricSet,
    pub label: RegimeLabel,
}

#[derive(Debug, Serialize)]
pub struct TrajectoryView {
    pub phase_ticks: [u64; 3],
    pub samples: Vec<EvalSample>,
    pub summary: RunSummary,
}

/// Scaled-down engine settings that keep a browser run interactive.
fn demo_config(n_agents: usize, phase_scale: f64, seed: u64) -> SimConfig {
    let base = SimConfig::default();
    let scale = |t: u64| ((t as f64 * phase_scale).round() as u64).max(1);
    SimConfig {
        n_agents,
        phase_ticks: base.phase_ticks.map(scale),
        eval_interval: scale(base.eval_interval),
        eval_tasks: 20,
        probe_tasks: 20,
        seed,
        ..base
    }
}

pub fn metrics(q_h: f64, q_a: f64, q_ha: f64, hcdr: f64) -> Result<MetricsView, String> {
    let triple = PerformanceTriple::new(q_h, q_a, q_ha).map_err(|e| e.to_string())?;
    let metrics = MetricSet::from_triple(&triple, hcdr).map_err(|e| e.to_string())?;
    let label = classify_regime(&metrics);
    Ok(MetricsView { metrics, label })
}

pub fn trajectory(
    regime: &str,
    sensitivity: f64,
    delta: f64,
    n_agents: usize,
    phase_scale: f64,
    seed: u64,
) -> Result<TrajectoryView, String> {
    let kind: RegimeKind = regime.parse().map_err(|e: amplify_core::Error| e.to_string())?;
    let mut config = demo_config(n_agents, phase_scale, seed);
    config.regime = kind.into();
    config.dynamics.sensitivity = sensitivity;
    config.dynamics.delta = delta;
    let result = run(&config).map_err(|e| e.to_string())?;
    Ok(TrajectoryView {
        phase_ticks: config.phase_ticks,
        samples: result.samples,
        summary: result.summary,
    })
}

pub fn delta_search(
    deltas: &[f64],
    sensitivity: f64,
    n_agents: usize,
    phase_scale: f64,
    seeds: usize,
) -> Result<OptResult, String> {
    let mut base = demo_config(n_agents, phase_scale, 0);
    base.dynamics.sensitivity = sensitivity;
    let spec = OptSpec {
        base,
        delta_grid: deltas.to_vec(),
        seeds: (0..seeds as u64).collect(),
    };
    optimize_atrophy(&spec).map_err(|e| e.to_string())
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsError::new(&e))
}

/// CAI*, D, HRI and the regime label for one performance triple.
#[wasm_bindgen(js_name = metrics)]
pub fn metrics_js(q_h: f64, q_a: f64, q_ha: f64, hcdr: f64) -> Result<String, JsError> {
    to_js(metrics(q_h, q_a, q_ha, hcdr))
}

/// Evaluation samples and summary for one run.
#[wasm_bindgen(js_name = trajectory)]
pub fn trajectory_js(
    regime: &str,
    sensitivity: f64,
    delta: f64,
    n_agents: usize,
    phase_scale: f64,
    seed: u64,
) -> Result<String, JsError> {
    to_js(trajectory(regime, sensitivity, delta, n_agents, phase_scale, seed))
}

/// Constrained search over `deltas` under mixed reliance.
#[wasm_bindgen(js_name = deltaSearch)]
pub fn delta_search_js(
    deltas: Vec<f64>,
    sensitivity: f64,
    n_agents: usize,
    phase_scale: f64,
    seeds: usize,
) -> Result<String, JsError> {
    to_js(delta_search(&deltas, sensitivity, n_agents, phase_scale, seeds))
}
