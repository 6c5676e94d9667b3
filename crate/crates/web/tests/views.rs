use amplify_core::metrics::{DominanceBand, Quadrant};
use amplify_web::{delta_search, metrics, trajectory};

#[test]
fn metrics_view_matches_the_worked_example() {
    let v = metrics(0.70, 0.80, 0.92, 0.0).unwrap();
    assert!((v.metrics.cai_star - 0.15).abs() < 1e-12);
    assert!((v.metrics.d - 0.8 / 0.92).abs() < 1e-12);
    assert_eq!(v.label.dominance_band, DominanceBand::AIDominated);
    assert_eq!(v.label.quadrant, Quadrant::Amplification);
    assert!(metrics(1.5, 0.8, 0.9, 0.0).is_err());
}

#[test]
fn trajectory_is_deterministic_and_scaled() {
    let a = trajectory("mixed", 0.4, 0.002, 30, 0.1, 5).unwrap();
    let b = trajectory("mixed", 0.4, 0.002, 30, 0.1, 5).unwrap();
    assert_eq!(a.phase_ticks, [50, 200, 50]);
    assert_eq!(a.samples, b.samples);
    assert_eq!(a.samples.len(), 25);
    assert!(trajectory("sometimes", 0.4, 0.002, 30, 0.1, 5).is_err());
}

#[test]
fn delta_search_returns_every_candidate() {
    let r = delta_search(&[0.004, 0.0], 0.4, 20, 0.1, 2).unwrap();
    assert_eq!(r.candidates.len(), 2);
    assert!(delta_search(&[], 0.4, 20, 0.1, 2).is_err());
}
