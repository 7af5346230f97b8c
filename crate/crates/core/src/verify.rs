//! Accept/abort logic on a transcript and concentration bounds for its
//! guarantees.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::{RoundRecord, Transcript};

/// Largest tolerable test-failure rate for `k` test types when the
/// computation itself errs with probability `p`.
pub fn sigma_threshold(k: u32, p: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::param("k", "at least one test type is required"));
    }
    if !p.is_finite() || !(0.0..0.5).contains(&p) {
        return Err(Error::param("p", format!("{p} is outside [0, 1/2)")));
    }
    Ok((2.0 * p - 1.0) / (2.0 * p - 2.0) / k as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub omega: f64,
    pub sigma: f64,
    pub nu: f64,
    pub k: u32,
    pub p: f64,
}

impl Thresholds {
    /// Builds thresholds with `sigma` derived from `(k, p)` and checks
    /// `0 <= nu <= omega < sigma <= 1`.
    pub fn new(omega: f64, nu: f64, k: u32, p: f64) -> Result<Self> {
        let th = Thresholds {
            omega,
            sigma: sigma_threshold(k, p)?,
            nu,
            k,
            p,
        };
        th.validate()?;
        Ok(th)
    }

    pub fn validate(&self) -> Result<()> {
        let Thresholds { omega, sigma, nu, .. } = *self;
        if ![omega, sigma, nu].iter().all(|x| x.is_finite()) {
            return Err(Error::IllPosedThresholds("non-finite threshold".into()));
        }
        if !(0.0 <= nu && nu <= omega && omega < sigma && sigma <= 1.0) {
            return Err(Error::IllPosedThresholds(format!(
                "need 0 <= nu <= omega < sigma <= 1, got nu = {nu}, omega = {omega}, sigma = {sigma}"
            )));
        }
        Ok(())
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds::new(0.18, 0.14, 2, 0.0).expect("default thresholds are well posed")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub n: usize,
    pub n_test: usize,
    pub n_comp: usize,
    pub failed_tests: usize,
    pub epsilon: f64,
    pub omega: f64,
    /// Share of computation rounds agreeing with the majority; `None` when
    /// an aborted run has a tied vote.
    pub majority_fraction: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Accept { output: bool, stats: RunStats },
    Abort { stats: RunStats },
}

impl Verdict {
    pub fn stats(&self) -> &RunStats {
        match self {
            Verdict::Accept { stats, .. } | Verdict::Abort { stats } => stats,
        }
    }

    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept { .. })
    }

    pub fn output(&self) -> Option<bool> {
        match self {
            Verdict::Accept { output, .. } => Some(*output),
            Verdict::Abort { .. } => None,
        }
    }
}

fn failure_counts<'a, I: IntoIterator<Item = &'a RoundRecord>>(tests: I) -> Result<(usize, usize)> {
    let (mut n, mut failed) = (0, 0);
    for r in tests {
        n += 1;
        failed += (r.m1_true ^ r.m2_true) as usize;
    }
    if n == 0 {
        return Err(Error::EmptyRoundClass("test"));
    }
    Ok((n, failed))
}

/// Fraction of test rounds whose corrected outcomes disagree.
pub fn test_error_fraction(t: &Transcript) -> Result<f64> {
    let (n, failed) = failure_counts(t.tests())?;
    Ok(failed as f64 / n as f64)
}

/// Modal `m2_true` over the given computation rounds, with its share.
pub fn majority_vote<'a, I: IntoIterator<Item = &'a RoundRecord>>(records: I) -> Result<(bool, f64)> {
    let (mut n, mut ones) = (0usize, 0usize);
    for r in records {
        n += 1;
        ones += r.m2_true as usize;
    }
    if n == 0 {
        return Err(Error::EmptyRoundClass("computation"));
    }
    let zeros = n - ones;
    match ones.cmp(&zeros) {
        std::cmp::Ordering::Equal => Err(Error::MajorityTie(ones)),
        std::cmp::Ordering::Greater => Ok((true, ones as f64 / n as f64)),
        std::cmp::Ordering::Less => Ok((false, zeros as f64 / n as f64)),
    }
}

/// Accepts iff the failed-test fraction is at most `omega`, then outputs the
/// majority of the computation rounds.
pub fn decide(t: &Transcript, th: &Thresholds) -> Result<Verdict> {
    th.validate()?;
    let (n_test, failed_tests) = failure_counts(t.tests())?;
    let n_comp = t.computations().count();
    if n_comp == 0 {
        return Err(Error::EmptyRoundClass("computation"));
    }
    let epsilon = failed_tests as f64 / n_test as f64;
    let mut stats = RunStats {
        n: t.rounds.len(),
        n_test,
        n_comp,
        failed_tests,
        epsilon,
        omega: th.omega,
        majority_fraction: None,
    };
    if epsilon <= th.omega {
        let (output, fraction) = majority_vote(t.computations())?;
        stats.majority_fraction = Some(fraction);
        Ok(Verdict::Accept { output, stats })
    } else {
        stats.majority_fraction = majority_vote(t.computations()).ok().map(|(_, f)| f);
        Ok(Verdict::Abort { stats })
    }
}

/// Generic Hoeffding tail `exp(-2 n gap^2)` for an empirical mean of `n`
/// bounded samples drifting by `gap` from its expectation. Underflows to 0
/// for very large exponents; see [`hoeffding_ln`].
pub fn hoeffding(n: u64, gap: f64) -> f64 {
    hoeffding_ln(n, gap).exp()
}

pub fn hoeffding_ln(n: u64, gap: f64) -> f64 {
    -2.0 * n as f64 * gap * gap
}

fn check_n(n_test: u64) -> Result<()> {
    if n_test == 0 {
        return Err(Error::param("n_test", "at least one test round is required"));
    }
    Ok(())
}

/// Generic bound on the chance that an honest run whose true failure rate is
/// at most `nu` aborts at threshold `omega`.
pub fn robustness_bound(n_test: u64, omega: f64, nu: f64) -> Result<f64> {
    check_n(n_test)?;
    // negated so NaN is rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(omega > nu) || !(0.0..=1.0).contains(&nu) || omega > 1.0 {
        return Err(Error::IllPosedThresholds(format!("robustness needs nu < omega, got nu = {nu}, omega = {omega}")));
    }
    Ok(hoeffding(n_test, omega - nu))
}

/// Generic bound on the chance that a deviation failing tests at rate at
/// least `sigma` is accepted at threshold `omega`.
pub fn soundness_bound(n_test: u64, sigma: f64, omega: f64) -> Result<f64> {
    check_n(n_test)?;
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(sigma > omega) || !(0.0..=1.0).contains(&omega) || sigma > 1.0 {
        return Err(Error::IllPosedThresholds(format!("soundness needs omega < sigma, got omega = {omega}, sigma = {sigma}")));
    }
    Ok(hoeffding(n_test, sigma - omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::devices::NoiseParams;
    use crate::protocol::{Algorithm, ProtocolConfig, RoundType};
    use proptest::prelude::*;

    fn record(round_type: RoundType, m1: bool, m2: bool) -> RoundRecord {
        let mut t = crate::protocol::run_protocol(
            &ProtocolConfig::new(Algorithm::y_basis(false, false), 1, NoiseParams::ideal()),
            0,
        )
        .unwrap();
        let mut r = t.rounds.remove(0);
        r.round_type = round_type;
        r.m1_true = m1;
        r.m2_true = m2;
        r
    }

    fn transcript(tests: &[(bool, bool)], comps: &[bool]) -> Transcript {
        let template = record(RoundType::Test, false, false);
        let mut rounds = Vec::new();
        for &(m1, m2) in tests {
            rounds.push(RoundRecord { round_type: RoundType::Test, m1_true: m1, m2_true: m2, ..template.clone() });
        }
        for &m2 in comps {
            rounds.push(RoundRecord { round_type: RoundType::Computation, m2_true: m2, ..template.clone() });
        }
        Transcript {
            config: ProtocolConfig::new(Algorithm::y_basis(false, false), rounds.len() as u64, NoiseParams::ideal()),
            seed: 0,
            rounds,
        }
    }

    fn with_failures(failed: usize, total: usize, comps: &[bool]) -> Transcript {
        let tests: Vec<_> = (0..total).map(|i| (false, i < failed)).collect();
        transcript(&tests, comps)
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_threshold(2, 0.0).unwrap(), 0.25);
        assert_eq!(sigma_threshold(1, 0.0).unwrap(), 0.5);
        assert!((sigma_threshold(2, 0.25).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!(sigma_threshold(2, 0.5).is_err());
        assert!(sigma_threshold(0, 0.1).is_err());
    }

    #[test]
    fn sigma_monotone_on_grid() {
        for k in 1..6 {
            for i in 0..49 {
                let p = i as f64 / 100.0;
                let s = sigma_threshold(k, p).unwrap();
                assert!(sigma_threshold(k + 1, p).unwrap() < s);
                assert!(sigma_threshold(k, p + 0.01).unwrap() < s);
            }
        }
    }

    #[test]
    fn thresholds_well_posed() {
        let th = Thresholds::default();
        assert_eq!((th.omega, th.sigma, th.nu, th.k, th.p), (0.18, 0.25, 0.14, 2, 0.0));
        assert!(Thresholds::new(0.3, 0.14, 2, 0.0).is_err());
        assert!(Thresholds::new(0.18, 0.2, 2, 0.0).is_err());
        assert!(Thresholds::new(0.25, 0.1, 2, 0.0).is_err());
    }

    #[test]
    fn error_fraction_examples() {
        assert_eq!(test_error_fraction(&with_failures(0, 50, &[false])).unwrap(), 0.0);
        assert!((test_error_fraction(&with_failures(134, 1000, &[false])).unwrap() - 0.134).abs() < 1e-15);
        assert_eq!(test_error_fraction(&transcript(&[], &[true])), Err(Error::EmptyRoundClass("test")));
    }

    #[test]
    fn decide_examples() {
        let comps = [false, false, true];
        let th = Thresholds::default();
        let v = decide(&with_failures(134, 1000, &comps), &th).unwrap();
        assert_eq!(v.output(), Some(false));
        assert!((v.stats().majority_fraction.unwrap() - 2.0 / 3.0).abs() < 1e-15);

        let v = decide(&with_failures(200, 1000, &comps), &th).unwrap();
        assert!(!v.is_accept());
        assert_eq!(v.stats().failed_tests, 200);

        let v = decide(&with_failures(18, 100, &comps), &th).unwrap();
        assert!(v.is_accept(), "boundary is inclusive");

        assert_eq!(decide(&with_failures(0, 10, &[true, false]), &th), Err(Error::MajorityTie(1)));
        assert_eq!(decide(&with_failures(0, 10, &[]), &th), Err(Error::EmptyRoundClass("computation")));
    }

    #[test]
    fn majority_examples() {
        let bits = |zeros: usize, ones: usize| {
            let r = record(RoundType::Computation, false, false);
            let mut v = vec![RoundRecord { m2_true: false, ..r.clone() }; zeros];
            v.extend(vec![RoundRecord { m2_true: true, ..r }; ones]);
            v
        };
        let (o, f) = majority_vote(&bits(866, 134)).unwrap();
        assert!(!o && (f - 0.866).abs() < 1e-12);
        let (o, f) = majority_vote(&bits(140, 860)).unwrap();
        assert!(o && (f - 0.86).abs() < 1e-12);
        assert_eq!(majority_vote(&bits(1, 0)).unwrap(), (false, 1.0));
        assert_eq!(majority_vote(&bits(3, 3)), Err(Error::MajorityTie(3)));
    }

    #[test]
    fn bounds_spot_values() {
        let b = robustness_bound(13720, 0.18, 0.14).unwrap();
        assert!((b.ln() + 43.904).abs() < 1e-9, "{b:e}");
        assert!((b / 8.5e-20 - 1.0).abs() < 0.02);
        assert!(robustness_bound(100, 0.14, 0.14).is_err());
        assert!(soundness_bound(100, 0.25, 0.25).is_err());
        assert!(robustness_bound(0, 0.18, 0.14).is_err());
        assert_eq!(soundness_bound(10, 0.25, 0.18).unwrap(), (-2.0 * 10.0 * 0.07f64 * 0.07).exp());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn bounds_decrease_in_n(n in 1u64..5_000, gap in 0.001f64..0.2) {
            let omega = 0.14 + gap.min(0.1);
            let r0 = robustness_bound(n, omega, 0.14).unwrap();
            let r1 = robustness_bound(n + 1, omega, 0.14).unwrap();
            prop_assert!(r1 < r0 && r0 <= 1.0 && r1 > 0.0);
            let s0 = soundness_bound(n, 0.25, 0.25 - gap).unwrap();
            let s1 = soundness_bound(n + 1, 0.25, 0.25 - gap).unwrap();
            prop_assert!(s1 < s0 && s1 > 0.0);
        }

        #[test]
        fn accept_implies_epsilon_below_omega(failed in 0usize..200, comps in proptest::collection::vec(any::<bool>(), 1..20)) {
            let t = with_failures(failed, 200, &comps);
            match decide(&t, &Thresholds::default()) {
                Ok(v) if v.is_accept() => prop_assert!(test_error_fraction(&t).unwrap() <= 0.18),
                Ok(_) => prop_assert!(test_error_fraction(&t).unwrap() > 0.18),
                Err(e) => prop_assert!(matches!(e, Error::MajorityTie(_))),
            }
        }
    }
}
