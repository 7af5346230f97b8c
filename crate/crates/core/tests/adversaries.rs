mod common;

use statrs::distribution::{ChiSquared, ContinuousCDF};
use vbqc::devices::{NoiseParams, ServerBehavior};
use vbqc::protocol::{run_protocol, Algorithm, ProtocolConfig, Transcript};
use vbqc::{decide, test_error_fraction, Thresholds};

fn run(behavior: ServerBehavior, noise: NoiseParams, n: u64, seed: u64) -> Transcript {
    let mut cfg = ProtocolConfig::new(Algorithm::y_basis(false, false), n, noise);
    cfg.behavior = behavior;
    run_protocol(&cfg, seed).unwrap()
}

fn strategies() -> Vec<ServerBehavior> {
    [
        "fixed-outcome:q2=1",
        "angle-tamper:q2=4",
        "outcome-flip:q2=1",
        "outcome-flip:q1=0.3",
        "state-replace:mixed",
        "state-replace:plus-plus",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

/// Pearson statistic of the `(delta1, delta2)` histogram against uniform.
fn angle_chi_square(t: &Transcript) -> f64 {
    let mut counts = [[0usize; 8]; 8];
    for r in &t.rounds {
        counts[r.delta1.units() as usize][r.delta2.units() as usize] += 1;
    }
    let e = t.rounds.len() as f64 / 64.0;
    counts.iter().flatten().map(|&c| (c as f64 - e).powi(2) / e).sum()
}

#[test]
fn visible_angles_stay_uniform_under_every_strategy() {
    let critical = ChiSquared::new(63.0).unwrap().inverse_cdf(0.99);
    let mut all = strategies();
    all.push(ServerBehavior::Honest);
    for (i, b) in all.into_iter().enumerate() {
        let t = run(b.clone(), NoiseParams::measured(), 20_000, 100 + i as u64);
        let stat = angle_chi_square(&t);
        assert!(stat < critical, "{b}: chi2 = {stat} >= {critical}");
    }
}

#[test]
fn failure_rate_does_not_grow_with_visibility() {
    let grid = [0.6, 0.7, 0.8, 0.9, 1.0];
    let rates: Vec<(f64, usize)> = grid
        .iter()
        .map(|&v| {
            let noise = NoiseParams { v, lambda: 0.493, ..NoiseParams::ideal() };
            let t = run(ServerBehavior::Honest, noise, 10_000, 3);
            (test_error_fraction(&t).unwrap(), t.tests().count())
        })
        .collect();
    for w in rates.windows(2) {
        let ((e0, n0), (e1, n1)) = (w[0], w[1]);
        let tol = 3.0 * (e0 * (1.0 - e0) / n0 as f64 + e1 * (1.0 - e1) / n1 as f64).sqrt();
        assert!(e1 <= e0 + tol, "{rates:?}");
    }
    assert_eq!(rates[4].0, 0.0);
}

#[test]
fn output_changing_strategies_are_rejected() {
    let th = Thresholds::default();
    for b in ["fixed-outcome:q2=1", "angle-tamper:q2=4", "outcome-flip:q2=1"] {
        let behavior: ServerBehavior = b.parse().unwrap();
        // under ideal devices the strategy flips the majority
        let probe = run(behavior.clone(), NoiseParams::ideal(), 2_000, 0);
        let (out, _) = vbqc::majority_vote(probe.computations()).unwrap();
        assert!(out, "{b} does not change the output");
        let accepted = (0..100)
            .filter(|&s| decide(&run(behavior.clone(), NoiseParams::measured(), 10_000, s), &th).unwrap().is_accept())
            .count();
        assert_eq!(accepted, 0, "{b}");
    }
}

#[test]
fn honest_noisy_runs_are_accepted() {
    let th = Thresholds::default();
    let accepted = (0..100)
        .filter(|&s| {
            let v = decide(&run(ServerBehavior::Honest, NoiseParams::measured(), 10_000, 1000 + s), &th).unwrap();
            v.is_accept() && v.output() == Some(false)
        })
        .count();
    assert!(accepted >= 99, "{accepted}/100");
}

#[test]
fn replacement_states_fail_tests() {
    for (b, expected) in [("state-replace:mixed", 0.5), ("state-replace:plus-plus", 0.5)] {
        let t = run(b.parse().unwrap(), NoiseParams::ideal(), 20_000, 4);
        let eps = test_error_fraction(&t).unwrap();
        let n = t.tests().count();
        assert!((eps - expected).abs() <= common::three_sigma(expected, n), "{b}: {eps}");
    }
}
