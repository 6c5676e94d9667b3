//! Closed-form collaboration metrics.
//!
//! Everything here is a pure function of its arguments: the amplification
//! index (CAI*), the dependency ratio (D), the human reliance index (HRI),
//! the human cognitive drift rate (HCDR), the idealized synergy model and the
//! phase-diagram regime classifier.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dependency ratio above which a system counts as AI-dominated.
pub const AI_DOMINATED_THRESHOLD: f64 = 0.8;
/// Dependency ratio below which a system counts as human-dominant.
pub const HUMAN_DOMINANT_THRESHOLD: f64 = 0.5;

/// Standalone human, standalone AI and hybrid performance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformanceTriple {
    pub q_h: f64,
    pub q_a: f64,
    pub q_ha: f64,
}

impl PerformanceTriple {
    pub fn new(q_h: f64, q_a: f64, q_ha: f64) -> Result<Self> {
        for (field, v) in [("q_h", q_h), ("q_a", q_a), ("q_ha", q_ha)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::config(field, format!("{v} is outside [0, 1]")));
            }
        }
        Ok(Self { q_h, q_a, q_ha })
    }

    fn best_standalone(&self) -> f64 {
        self.q_h.max(self.q_a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub cai_star: f64,
    pub d: f64,
    pub hri: f64,
    pub hcdr: f64,
}

impl MetricSet {
    /// Computes CAI*, D and HRI from `triple` and attaches a drift rate.
    pub fn from_triple(triple: &PerformanceTriple, hcdr: f64) -> Result<Self> {
        let d = dependency_ratio(triple)?;
        Ok(Self {
            cai_star: cai_star(triple)?,
            d,
            hri: hri(d),
            hcdr,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    Amplification,
    AutomationTrap,
    HumanDominant,
    IneffectiveAutomation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DominanceBand {
    HumanDominant,
    Balanced,
    AIDominated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegimeLabel {
    pub quadrant: Quadrant,
    pub sustainable: bool,
    pub dominance_band: DominanceBand,
}

/// Relative gain of the hybrid over the best standalone agent.
pub fn cai_star(t: &PerformanceTriple) -> Result<f64> {
    let best = t.best_standalone();
    if best <= 0.0 {
        return Err(Error::DegenerateBaseline);
    }
    Ok((t.q_ha - best) / best)
}

/// `q_a / q_ha`. Values above 1 mean the hybrid underperforms the AI baseline.
pub fn dependency_ratio(t: &PerformanceTriple) -> Result<f64> {
    if t.q_ha <= 0.0 {
        return Err(Error::ZeroHybrid);
    }
    Ok(t.q_a / t.q_ha)
}

pub fn hri(d: f64) -> f64 {
    1.0 - d
}

/// Drift rate of unaided performance: the least-squares slope of `q_h`
/// against time.
///
/// The slope is evaluated in its pairwise form
/// `sum_{i<j} (t_j - t_i)(y_j - y_i) / sum_{i<j} (t_j - t_i)^2`, which equals
/// the centered OLS slope exactly in real arithmetic. Every term of the
/// numerator carries the sign of `y_j - y_i`, so a nondecreasing series can
/// never round to a negative drift. With two samples this is the plain
/// difference quotient.
pub fn hcdr(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    if let Some(index) = samples
        .windows(2)
        .position(|w| w[1].0.partial_cmp(&w[0].0) != Some(std::cmp::Ordering::Greater))
        .map(|i| i + 1)
    {
        return Err(Error::NonMonotoneTime { index });
    }

    let mut num = 0.0;
    let mut den = 0.0;
    for (j, &(tj, yj)) in samples.iter().enumerate() {
        for &(ti, yi) in &samples[..j] {
            let dt = tj - ti;
            num += dt * (yj - yi);
            den += dt * dt;
        }
    }
    Ok(num / den)
}

/// Idealized synergy model `q_h + q_a + alpha * q_h * q_a`. Deliberately
/// unclamped; it is a reference curve, not a bounded measurement.
pub fn synergy_model(q_h: f64, q_a: f64, alpha: f64) -> f64 {
    q_h + q_a + alpha * q_h * q_a
}

pub fn dominance_band(d: f64) -> DominanceBand {
    if d > AI_DOMINATED_THRESHOLD {
        DominanceBand::AIDominated
    } else if d >= HUMAN_DOMINANT_THRESHOLD {
        DominanceBand::Balanced
    } else {
        DominanceBand::HumanDominant
    }
}

/// Places a metric set on the (D, CAI*) phase diagram.
///
/// The vertical split sits at `CAI* = 0` (zero gain is not amplification),
/// the horizontal split at the AI-dominated threshold `D = 0.8`. The
/// upper-right quadrant is an automation trap only while HCDR is negative;
/// a sustainable high-dependency gain is reported as amplification.
pub fn classify_regime(m: &MetricSet) -> RegimeLabel {
    let sustainable = m.hcdr >= 0.0;
    let band = dominance_band(m.d);
    let high_d = band == DominanceBand::AIDominated;
    let quadrant = match (m.cai_star > 0.0, high_d) {
        (true, true) if !sustainable => Quadrant::AutomationTrap,
        (true, _) => Quadrant::Amplification,
        (false, false) => Quadrant::HumanDominant,
        (false, true) => Quadrant::IneffectiveAutomation,
    };
    RegimeLabel {
        quadrant,
        sustainable,
        dominance_band: band,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triple(q_h: f64, q_a: f64, q_ha: f64) -> PerformanceTriple {
        PerformanceTriple::new(q_h, q_a, q_ha).unwrap()
    }

    /// Textbook centered least squares, kept independent of `hcdr`.
    fn ols_oracle(samples: &[(f64, f64)]) -> f64 {
        let n = samples.len() as f64;
        let tm = samples.iter().map(|s| s.0).sum::<f64>() / n;
        let ym = samples.iter().map(|s| s.1).sum::<f64>() / n;
        let sxy: f64 = samples.iter().map(|s| (s.0 - tm) * (s.1 - ym)).sum();
        let sxx: f64 = samples.iter().map(|s| (s.0 - tm).powi(2)).sum();
        sxy / sxx
    }

    #[test]
    fn worked_diagnostic_example() {
        let t = triple(0.70, 0.80, 0.92);
        assert!((cai_star(&t).unwrap() - 0.15).abs() < 1e-9);
        let d = dependency_ratio(&t).unwrap();
        assert!((d - 0.869_565_217_391_304_3).abs() < 1e-9);
        assert!((hri(d) - 0.130_434_782_608_695_7).abs() < 1e-9);
    }

    #[test]
    fn cai_zero_when_hybrid_matches_best() {
        assert_eq!(cai_star(&triple(0.5, 0.8, 0.8)).unwrap(), 0.0);
        assert_eq!(cai_star(&triple(0.63, 1.0, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_inputs_are_errors() {
        assert_eq!(
            cai_star(&triple(0.0, 0.0, 0.5)),
            Err(Error::DegenerateBaseline)
        );
        assert_eq!(dependency_ratio(&triple(0.5, 0.5, 0.0)), Err(Error::ZeroHybrid));
        assert!(PerformanceTriple::new(1.2, 0.5, 0.5).is_err());
    }

    #[test]
    fn dependency_ratio_values() {
        assert_eq!(dependency_ratio(&triple(0.3, 0.9, 0.9)).unwrap(), 1.0);
        let d = dependency_ratio(&triple(0.5, 1.0, 0.9724)).unwrap();
        assert!((d - 1.0284).abs() < 1e-4);
        // Table-style row: D * Q_HA recovers Q_A = 1.
        assert!((d * 0.9724 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hri_values() {
        assert!((hri(0.869565) - 0.130435).abs() < 1e-12);
        assert_eq!(hri(1.0), 0.0);
        assert!((hri(1.0291) + 0.0291).abs() < 1e-12);
    }

    #[test]
    fn hcdr_examples() {
        let two = hcdr(&[(100.0, 0.60), (200.0, 0.58)]).unwrap();
        assert!((two + 0.0002).abs() < 1e-15);
        assert_eq!(hcdr(&[(0.0, 0.4), (5.0, 0.4), (9.0, 0.4)]).unwrap(), 0.0);

        let lin = [(0.0, 0.5), (100.0, 0.6), (200.0, 0.7)];
        let oracle = ols_oracle(&lin);
        assert!((oracle - 0.001).abs() < 1e-15);
        assert!((hcdr(&lin).unwrap() - oracle).abs() < 1e-15);
    }

    #[test]
    fn hcdr_errors() {
        assert_eq!(
            hcdr(&[(1.0, 0.5)]),
            Err(Error::InsufficientSamples { needed: 2, got: 1 })
        );
        assert_eq!(
            hcdr(&[(1.0, 0.5), (3.0, 0.5), (3.0, 0.6)]),
            Err(Error::NonMonotoneTime { index: 2 })
        );
    }

    #[test]
    fn synergy_examples() {
        assert_eq!(synergy_model(0.5, 0.5, 0.0), 1.0);
        assert_eq!(synergy_model(0.0, 0.7, 3.0), 0.7);
        assert!((synergy_model(0.5, 0.5, 0.4) - 1.1).abs() < 1e-15);
    }

    fn metrics(cai_star: f64, d: f64, hcdr: f64) -> MetricSet {
        MetricSet {
            cai_star,
            d,
            hri: hri(d),
            hcdr,
        }
    }

    #[test]
    fn classify_examples() {
        let trap = classify_regime(&metrics(0.15, 0.87, -0.001));
        assert_eq!(trap.quadrant, Quadrant::AutomationTrap);
        assert!(!trap.sustainable);
        assert_eq!(trap.dominance_band, DominanceBand::AIDominated);

        let amp = classify_regime(&metrics(0.1, 0.6, 0.0));
        assert_eq!(amp.quadrant, Quadrant::Amplification);
        assert!(amp.sustainable);
        assert_eq!(amp.dominance_band, DominanceBand::Balanced);

        let mixed = classify_regime(&metrics(-0.0276, 1.0290, 0.0001));
        assert_eq!(mixed.quadrant, Quadrant::IneffectiveAutomation);
        assert!(mixed.sustainable);
        assert_eq!(mixed.dominance_band, DominanceBand::AIDominated);

        assert_eq!(
            classify_regime(&metrics(-0.2, 0.3, 0.0)).quadrant,
            Quadrant::HumanDominant
        );
        // zero gain is not amplification
        assert_eq!(
            classify_regime(&metrics(0.0, 0.6, 0.0)).quadrant,
            Quadrant::HumanDominant
        );
    }

    #[test]
    fn band_edges_are_half_open() {
        assert_eq!(dominance_band(0.4999), DominanceBand::HumanDominant);
        assert_eq!(dominance_band(0.5), DominanceBand::Balanced);
        assert_eq!(dominance_band(0.8), DominanceBand::Balanced);
        assert_eq!(dominance_band(0.8000001), DominanceBand::AIDominated);
    }

    fn unit() -> impl Strategy<Value = f64> {
        0.0f64..=1.0
    }

    proptest! {
        #[test]
        fn d_plus_hri_is_one(q_h in unit(), q_a in unit(), q_ha in 0.01f64..=1.0) {
            let d = dependency_ratio(&triple(q_h, q_a, q_ha)).unwrap();
            prop_assert!(d >= 0.0 && d.is_finite());
            prop_assert!((hri(d) + d - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn cai_sign_matches_table_semantics(q_h in unit(), q_a in 0.01f64..=1.0, q_ha in unit()) {
            let t = triple(q_h, q_a, q_ha);
            let c = cai_star(&t).unwrap();
            let best = q_h.max(q_a);
            prop_assert_eq!(c > 0.0, q_ha > best);
            prop_assert_eq!(c < 0.0, q_ha < best);
        }

        #[test]
        fn dependency_is_scale_consistent(q_a in 0.01f64..=0.5, q_ha in 0.01f64..=0.5, c in 0.1f64..=2.0) {
            let d1 = dependency_ratio(&triple(0.5, q_a, q_ha)).unwrap();
            let d2 = dependency_ratio(&triple(0.5, q_a * c, q_ha * c)).unwrap();
            prop_assert!((d1 - d2).abs() <= 1e-12 * d1.max(1.0));
        }

        #[test]
        fn hcdr_recovers_affine_slope(a in 0.0f64..1.0, b in -1e-3f64..1e-3, n in 2usize..60, dt in 1.0f64..200.0) {
            let s: Vec<(f64, f64)> = (0..n).map(|i| { let t = i as f64 * dt; (t, a + b * t) }).collect();
            prop_assert!((hcdr(&s).unwrap() - b).abs() <= 1e-12);
        }

        #[test]
        fn hcdr_matches_centered_ols(ys in prop::collection::vec(0.0f64..1.0, 2..40)) {
            let s: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, &y)| (100.0 * (i + 1) as f64, y)).collect();
            prop_assert!((hcdr(&s).unwrap() - ols_oracle(&s)).abs() <= 1e-12);
        }

        #[test]
        fn hcdr_nonnegative_on_nondecreasing(mut ys in prop::collection::vec(0.0f64..1.0, 2..40)) {
            ys.sort_by(f64::total_cmp);
            let s: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, &y)| (i as f64, y)).collect();
            prop_assert!(hcdr(&s).unwrap() >= 0.0);
        }

        #[test]
        fn classify_is_total_and_locally_stable(c in -1.0f64..1.0, d in 0.0f64..2.0, h in -0.01f64..0.01) {
            prop_assume!((c.abs() > 1e-9) && ((d - 0.8).abs() > 1e-9) && ((d - 0.5).abs() > 1e-9) && (h.abs() > 1e-9));
            let base = classify_regime(&metrics(c, d, h));
            let nudged = classify_regime(&metrics(c + 1e-13, d - 1e-13, h + 1e-13));
            prop_assert_eq!(base, nudged);
            if base.quadrant == Quadrant::AutomationTrap {
                prop_assert!(!base.sustainable);
            }
            prop_assert_eq!(base.dominance_band == DominanceBand::AIDominated, d > 0.8);
        }
    }
}
