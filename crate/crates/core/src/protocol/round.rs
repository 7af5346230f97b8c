//! One protocol round as a three-stage state machine. Each stage consumes the
//! previous one, so a round cannot measure qubit 2 before qubit 1.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ff::{ff_lookup, FFInput, FFOutput, VoltageCode};
use super::{
    bit, delta1, delta2_branches, delta2_offset, theta_prime, Algorithm, ClientSecrets, ProtocolVariant, RoundType,
    SecondMeasurement, TEST_PHI,
};
use crate::angle::Angle8;
use crate::devices::{perturbed_client_unitary, server_measure, DeviceErrors, QubitOf, ServerBehavior};
use crate::error::Result;
use crate::qmath::{kron, DensityMatrix1Q, DensityMatrix2Q, Qubit};

/// Lifecycle markers, recorded in the order they happen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    T0Prepared,
    T1MeasuredQ1,
    T2MeasuredQ2,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundOptions {
    pub variant: ProtocolVariant,
    pub second: SecondMeasurement,
}

/// Everything fixed across the rounds of a run.
#[derive(Clone, Copy, Debug)]
pub struct RoundSetup<'a> {
    pub alg: Algorithm,
    pub source: &'a DensityMatrix2Q,
    pub behavior: &'a ServerBehavior,
    pub options: RoundOptions,
}

/// Complete classical record of a round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub index: u64,
    pub round_type: RoundType,
    pub secrets_a: ClientSecrets,
    pub secrets_b: ClientSecrets,
    pub theta_prime: [Angle8; 2],
    pub delta1: Angle8,
    pub delta2_plus: Angle8,
    pub delta2_minus: Angle8,
    pub delta2: Angle8,
    pub v_code: VoltageCode,
    #[serde(with = "bit")]
    pub f: bool,
    #[serde(with = "bit")]
    pub m1_raw: bool,
    #[serde(with = "bit")]
    pub m2_raw: bool,
    #[serde(with = "bit")]
    pub m1_true: bool,
    #[serde(with = "bit")]
    pub m2_true: bool,
    pub device_errors: DeviceErrors,
    pub phases: Vec<Phase>,
}

impl RoundRecord {
    /// Combined outcome mask `r_i^A xor r_i^B`.
    pub fn r(&self) -> [bool; 2] {
        [self.secrets_a.r[0] ^ self.secrets_b.r[0], self.secrets_a.r[1] ^ self.secrets_b.r[1]]
    }

    /// A test round fails when the corrected outcomes differ.
    pub fn test_failed(&self) -> bool {
        self.round_type.is_test() && self.m1_true != self.m2_true
    }
}

/// Stage after the clients have masked the pair and the TTP has fixed its angles.
#[derive(Clone, Debug)]
pub struct Prepared {
    state: DensityMatrix2Q,
}

/// Stage after the first detection and the feed-forward decision.
#[derive(Clone, Debug)]
pub struct Q1Measured {
    qubit2: DensityMatrix1Q,
    m1_raw: bool,
    ff: FFOutput,
}

#[derive(Clone, Debug)]
pub struct Round<'a, S> {
    setup: RoundSetup<'a>,
    round_type: RoundType,
    secrets: [ClientSecrets; 2],
    errors: DeviceErrors,
    theta_prime: [Angle8; 2],
    delta1: Angle8,
    branches: (Angle8, Angle8),
    r: [bool; 2],
    phases: Vec<Phase>,
    stage: S,
}

impl<'a> Round<'a, Prepared> {
    /// Clients apply `Rz(theta) X^b` to each qubit, A before B; the TTP
    /// computes the blind angles.
    pub fn prepare(
        setup: RoundSetup<'a>,
        round_type: RoundType,
        mut secrets: [ClientSecrets; 2],
        errors: DeviceErrors,
    ) -> Self {
        if setup.options.variant == ProtocolVariant::Baseline {
            for s in &mut secrets {
                s.b = [false; 2];
            }
        }
        let [a, b] = secrets;
        let local = |q: usize| {
            perturbed_client_unitary(b.theta[q], b.b[q], errors.lc_phase_err[1][q])
                * perturbed_client_unitary(a.theta[q], a.b[q], errors.lc_phase_err[0][q])
        };
        let source = setup.behavior.source_override().unwrap_or(setup.source);
        let state = source.apply(&kron(&local(0), &local(1)));

        let theta_prime = theta_prime(&a, &b);
        let r = [a.r[0] ^ b.r[0], a.r[1] ^ b.r[1]];
        Round {
            setup,
            round_type,
            secrets,
            errors,
            theta_prime,
            delta1: delta1(theta_prime[0], &setup.alg, r[0], round_type),
            branches: delta2_branches(theta_prime[1], &setup.alg, r[1], round_type),
            r,
            phases: vec![Phase::T0Prepared],
            stage: Prepared { state },
        }
    }

    /// Server measures qubit 1 at `delta1`; the feed-forward unit picks the
    /// second basis from the detector lines.
    pub fn measure_first<R: Rng + ?Sized>(self, rng: &mut R) -> Result<Round<'a, Q1Measured>> {
        let target = QubitOf {
            state: &self.stage.state,
            qubit: Qubit::One,
        };
        let angle = self.delta1.radians() + self.errors.meas_angle_err[0];
        let (m1_raw, qubit2) = server_measure(self.setup.behavior, &target, Qubit::One, angle, rng)?;

        let (m1_plus, m1_minus) = FFInput::detector(m1_raw);
        let test = self.round_type.is_test();
        let ff = ff_lookup(FFInput {
            a: delta2_offset(self.theta_prime[1], &self.setup.alg, self.r[1], self.round_type),
            b: if test { TEST_PHI } else { self.setup.alg.phi[1] },
            r1: self.r[0],
            m1_plus,
            m1_minus,
            c: test,
        })?;
        let mut phases = self.phases;
        phases.push(Phase::T1MeasuredQ1);
        Ok(Round {
            setup: self.setup,
            round_type: self.round_type,
            secrets: self.secrets,
            errors: self.errors,
            theta_prime: self.theta_prime,
            delta1: self.delta1,
            branches: self.branches,
            r: self.r,
            phases,
            stage: Q1Measured { qubit2, m1_raw, ff },
        })
    }
}

impl Round<'_, Q1Measured> {
    /// Server measures qubit 2 in the basis set by the Pockels cell (or
    /// directly at `delta2`) and the clients undo every mask.
    pub fn measure_second<R: Rng + ?Sized>(self, rng: &mut R) -> Result<RoundRecord> {
        let Q1Measured { qubit2, m1_raw, ff } = self.stage;
        // the cell phase -phi selects basis phi, which is delta2 + f pi
        let (basis, f) = match self.setup.options.second {
            SecondMeasurement::PockelsCell => (-ff.v.pc_phase(), ff.f),
            SecondMeasurement::Direct => (ff.delta2, false),
        };
        let angle = basis.radians() + self.errors.meas_angle_err[1] + self.errors.pc_offset;
        let (m2_raw, ()) = server_measure(self.setup.behavior, &qubit2, Qubit::Two, angle, rng)?;

        let mut phases = self.phases;
        phases.push(Phase::T2MeasuredQ2);
        let [secrets_a, secrets_b] = self.secrets;
        Ok(RoundRecord {
            index: 0,
            round_type: self.round_type,
            secrets_a,
            secrets_b,
            theta_prime: self.theta_prime,
            delta1: self.delta1,
            delta2_plus: self.branches.0,
            delta2_minus: self.branches.1,
            delta2: ff.delta2,
            v_code: ff.v,
            f,
            m1_raw,
            m2_raw,
            m1_true: ff.m1_true(),
            m2_true: m2_raw ^ self.r[1] ^ f,
            device_errors: self.errors,
            phases,
        })
    }
}

/// Runs a round with explicit secrets.
pub fn execute_round<R: Rng + ?Sized>(
    setup: RoundSetup<'_>,
    round_type: RoundType,
    secrets: [ClientSecrets; 2],
    errors: DeviceErrors,
    rng: &mut R,
) -> Result<RoundRecord> {
    Round::prepare(setup, round_type, secrets, errors)
        .measure_first(rng)?
        .measure_second(rng)
}

/// Runs a round of the verifiable protocol with Pockels-cell feed-forward;
/// both clients draw their secrets from `rng`.
pub fn run_round<R: Rng + ?Sized>(
    alg: Algorithm,
    round_type: RoundType,
    source: &DensityMatrix2Q,
    errors: DeviceErrors,
    behavior: &ServerBehavior,
    rng: &mut R,
) -> Result<RoundRecord> {
    let setup = RoundSetup {
        alg,
        source,
        behavior,
        options: RoundOptions::default(),
    };
    let secrets = [ClientSecrets::sample(rng), ClientSecrets::sample(rng)];
    execute_round(setup, round_type, secrets, errors, rng)
}
