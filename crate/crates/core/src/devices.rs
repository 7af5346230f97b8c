//! Imperfect hardware and untrusted parties: the source noise model, sampled
//! device errors of the clients' and server's optics, and the server
//! strategies the verifier has to catch.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::angle::Angle8;
use crate::error::{Error, Result};
use crate::qmath::{
    bell_phi_minus, bell_phi_plus, hadamard, kron, pauli_x, rz, sample_branch, DensityMatrix,
    DensityMatrix1Q, DensityMatrix2Q, PureState2Q, Qubit, Unitary2,
};

/// How the Pockels-cell phase error is applied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PcOffsetMode {
    /// The same `+pc_phase_offset` every round.
    #[default]
    Fixed,
    /// `+pc_phase_offset` or `-pc_phase_offset` with equal probability, per round.
    Random,
}

/// Source and device imperfections.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseParams {
    /// Visibility of the emitted Bell pair.
    pub v: f64,
    /// Fraction of coloured (dephasing) noise in the non-visible part.
    pub lambda: f64,
    /// Half-width in radians of the uniform liquid-crystal phase error.
    pub lc_err_halfwidth: f64,
    /// Half-width in degrees of the measurement half-wave-plate misalignment.
    pub hwp_err_halfwidth: f64,
    /// Pockels-cell phase error in radians, qubit 2 only.
    pub pc_phase_offset: f64,
    #[serde(default)]
    pub pc_offset_mode: PcOffsetMode,
}

impl NoiseParams {
    /// Perfect source and devices.
    pub const fn ideal() -> Self {
        NoiseParams {
            v: 1.0,
            lambda: 0.0,
            lc_err_halfwidth: 0.0,
            hwp_err_halfwidth: 0.0,
            pc_phase_offset: 0.0,
            pc_offset_mode: PcOffsetMode::Fixed,
        }
    }

    /// Characterized values of the experimental setup.
    pub const fn measured() -> Self {
        NoiseParams {
            v: 0.935,
            lambda: 0.493,
            lc_err_halfwidth: PI / 8.0,
            hwp_err_halfwidth: 1.0,
            pc_phase_offset: PI / 16.0,
            pc_offset_mode: PcOffsetMode::Fixed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &'static str, x: f64| {
            if x.is_finite() && (0.0..=1.0).contains(&x) {
                Ok(())
            } else {
                Err(Error::param(name, format!("{x} is outside [0, 1]")))
            }
        };
        let nonneg = |name: &'static str, x: f64| {
            if x.is_finite() && x >= 0.0 {
                Ok(())
            } else {
                Err(Error::param(name, format!("{x} must be a finite non-negative number")))
            }
        };
        unit("v", self.v)?;
        unit("lambda", self.lambda)?;
        nonneg("lc_err_halfwidth", self.lc_err_halfwidth)?;
        nonneg("hwp_err_halfwidth", self.hwp_err_halfwidth)?;
        nonneg("pc_phase_offset", self.pc_phase_offset)
    }

    pub fn is_ideal(&self) -> bool {
        *self == NoiseParams::ideal()
    }
}

impl Default for NoiseParams {
    fn default() -> Self {
        NoiseParams::measured()
    }
}

/// The state emitted by the untrusted source, in the graph-state frame.
///
/// The white/coloured-noise mixture is built on the normalized Bell pairs
/// `|phi+>`, `|phi->` and then mapped through `I (x) H`, so `v = 1` gives the
/// graph state exactly.
pub fn noisy_source_state(p: &NoiseParams) -> Result<DensityMatrix2Q> {
    p.validate()?;
    let plus = bell_phi_plus().density();
    let minus = bell_phi_minus().density();
    let mixed = DensityMatrix2Q::maximally_mixed();
    let colored = (1.0 - p.v) * p.lambda / 2.0;
    let white = (1.0 - p.v) * (1.0 - p.lambda);
    let bell_frame = DensityMatrix::mixture(&[(p.v + colored, plus), (colored, minus), (white, mixed)])?;
    Ok(bell_frame.evolve(&kron(&Unitary2::identity(), &hadamard())))
}

/// Per-round perturbations of the optical elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DeviceErrors {
    /// Liquid-crystal phase error, indexed `[client][qubit]` with client A first.
    pub lc_phase_err: [[f64; 2]; 2],
    /// Equatorial-angle error of each measurement station.
    pub meas_angle_err: [f64; 2],
    /// Pockels-cell phase error on the qubit-2 basis.
    pub pc_offset: f64,
}

/// Draws one round's device errors. Always consumes the same amount of
/// randomness regardless of the parameters.
pub fn sample_device_errors<R: Rng + ?Sized>(p: &NoiseParams, rng: &mut R) -> DeviceErrors {
    let mut uniform = |half: f64| half * (2.0 * rng.random::<f64>() - 1.0);
    let lc = p.lc_err_halfwidth;
    let lc_phase_err = [[uniform(lc), uniform(lc)], [uniform(lc), uniform(lc)]];
    // a waveplate misaligned by eta rotates the analysed angle by 2 eta
    let station = 2.0 * p.hwp_err_halfwidth.to_radians();
    let meas_angle_err = [uniform(station), uniform(station)];
    let flip: bool = rng.random();
    let pc_offset = match p.pc_offset_mode {
        PcOffsetMode::Fixed => p.pc_phase_offset,
        PcOffsetMode::Random if flip => -p.pc_phase_offset,
        PcOffsetMode::Random => p.pc_phase_offset,
    };
    DeviceErrors {
        lc_phase_err,
        meas_angle_err,
        pc_offset,
    }
}

/// `Rz(theta + lc_err) X^b` as realized by a client's waveplate and liquid crystal.
pub fn perturbed_client_unitary(theta: Angle8, b: bool, lc_err: f64) -> Unitary2 {
    let flip = if b { pauli_x() } else { Unitary2::identity() };
    rz(theta.radians() + lc_err) * flip
}

/// Replacement states a malicious source/server can substitute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReplacementState {
    /// `I/4`.
    Mixed,
    /// `|00>`.
    Zero,
    /// `|+>|+>`, the graph state without its entangling gate.
    PlusPlus,
}

impl ReplacementState {
    pub fn density(self) -> DensityMatrix2Q {
        match self {
            ReplacementState::Mixed => DensityMatrix2Q::maximally_mixed(),
            ReplacementState::Zero => PureState2Q::basis(false, false).density(),
            ReplacementState::PlusPlus => {
                let plus = DensityMatrix1Q::from_bloch(1.0, 0.0, 0.0).expect("valid Bloch vector");
                plus.tensor(&plus)
            }
        }
    }
}

/// What the measuring server does with the qubits it receives.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "strategy")]
#[allow(clippy::large_enum_variant)]
pub enum ServerBehavior {
    #[default]
    Honest,
    /// Reports the given bit for each qubit that has one, ignoring the state.
    FixedOutcome { q1: Option<bool>, q2: Option<bool> },
    /// Measures honestly, then flips each report with the given probability.
    OutcomeFlip { q1: f64, q2: f64 },
    /// Measures at the instructed angle plus an offset.
    AngleTamper { q1: Angle8, q2: Angle8 },
    /// Discards the emitted pair and injects this state before the clients.
    StateReplace { state: DensityMatrix2Q },
}

impl ServerBehavior {
    pub fn name(&self) -> &'static str {
        match self {
            ServerBehavior::Honest => "honest",
            ServerBehavior::FixedOutcome { .. } => "fixed-outcome",
            ServerBehavior::OutcomeFlip { .. } => "outcome-flip",
            ServerBehavior::AngleTamper { .. } => "angle-tamper",
            ServerBehavior::StateReplace { .. } => "state-replace",
        }
    }

    /// State injected in place of the source's emission, if any.
    pub fn source_override(&self) -> Option<&DensityMatrix2Q> {
        match self {
            ServerBehavior::StateReplace { state } => Some(state),
            _ => None,
        }
    }

    /// Angle offset the server adds when measuring `qubit`.
    pub fn angle_offset(&self, qubit: Qubit) -> Angle8 {
        match self {
            ServerBehavior::AngleTamper { q1, q2 } => match qubit {
                Qubit::One => *q1,
                Qubit::Two => *q2,
            },
            _ => Angle8::ZERO,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let ServerBehavior::OutcomeFlip { q1, q2 } = self {
            for p in [q1, q2] {
                if !p.is_finite() || !(0.0..=1.0).contains(p) {
                    return Err(Error::param("adversary", format!("flip probability {p} outside [0, 1]")));
                }
            }
        }
        Ok(())
    }
}

/// Parses descriptors such as `honest`, `fixed-outcome:q2=0`,
/// `outcome-flip:q1=0.1,q2=0.5`, `angle-tamper:q2=4` or `state-replace:mixed`.
impl FromStr for ServerBehavior {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: String| Error::param("adversary", reason);
        let (name, args) = match s.trim().split_once(':') {
            Some((n, a)) => (n.trim(), a.trim()),
            None => (s.trim(), ""),
        };
        let mut pairs = Vec::new();
        if name != "state-replace" {
            for kv in args.split(',').map(str::trim).filter(|kv| !kv.is_empty()) {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| bad(format!("expected key=value, got `{kv}`")))?;
                let qubit = match k.trim() {
                    "q1" => Qubit::One,
                    "q2" => Qubit::Two,
                    other => return Err(bad(format!("unknown qubit key `{other}`"))),
                };
                pairs.push((qubit, v.trim().to_string()));
            }
        }
        let lookup = |q: Qubit| pairs.iter().find(|(k, _)| *k == q).map(|(_, v)| v.as_str());
        let parse_bit = |v: &str| match v {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(bad(format!("`{v}` is not a bit"))),
        };
        let behavior = match name {
            "honest" => ServerBehavior::Honest,
            "fixed-outcome" => ServerBehavior::FixedOutcome {
                q1: lookup(Qubit::One).map(parse_bit).transpose()?,
                q2: lookup(Qubit::Two).map(parse_bit).transpose()?,
            },
            "outcome-flip" => {
                let prob = |q| -> Result<f64> {
                    lookup(q)
                        .map(|v| v.parse::<f64>().map_err(|e| bad(format!("`{v}`: {e}"))))
                        .unwrap_or(Ok(0.0))
                };
                ServerBehavior::OutcomeFlip {
                    q1: prob(Qubit::One)?,
                    q2: prob(Qubit::Two)?,
                }
            }
            "angle-tamper" => {
                let angle = |q| -> Result<Angle8> { lookup(q).map(str::parse).unwrap_or(Ok(Angle8::ZERO)) };
                ServerBehavior::AngleTamper {
                    q1: angle(Qubit::One)?,
                    q2: angle(Qubit::Two)?,
                }
            }
            "state-replace" => {
                let state = match args {
                    "" | "mixed" => ReplacementState::Mixed,
                    "zero" => ReplacementState::Zero,
                    "plus-plus" => ReplacementState::PlusPlus,
                    other => return Err(bad(format!("unknown replacement state `{other}`"))),
                };
                ServerBehavior::StateReplace { state: state.density() }
            }
            other => return Err(bad(format!("unknown strategy `{other}`"))),
        };
        behavior.validate()?;
        Ok(behavior)
    }
}

impl fmt::Display for ServerBehavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bit = |b: &Option<bool>, k: &str| b.map(|b| format!("{k}={}", b as u8));
        match self {
            ServerBehavior::Honest => write!(f, "honest"),
            ServerBehavior::FixedOutcome { q1, q2 } => {
                let parts: Vec<String> = [bit(q1, "q1"), bit(q2, "q2")].into_iter().flatten().collect();
                write!(f, "fixed-outcome:{}", parts.join(","))
            }
            ServerBehavior::OutcomeFlip { q1, q2 } => write!(f, "outcome-flip:q1={q1},q2={q2}"),
            ServerBehavior::AngleTamper { q1, q2 } => {
                write!(f, "angle-tamper:q1={},q2={}", q1.units(), q2.units())
            }
            ServerBehavior::StateReplace { state } => {
                let named = [ReplacementState::Mixed, ReplacementState::Zero, ReplacementState::PlusPlus]
                    .into_iter()
                    .find(|r| r.density().approx_eq(state, 1e-12));
                match named {
                    Some(ReplacementState::Mixed) => write!(f, "state-replace:mixed"),
                    Some(ReplacementState::Zero) => write!(f, "state-replace:zero"),
                    Some(ReplacementState::PlusPlus) => write!(f, "state-replace:plus-plus"),
                    None => write!(f, "state-replace:custom"),
                }
            }
        }
    }
}

/// Something the server can perform an equatorial measurement on.
pub trait MeasurementTarget {
    /// State of whatever remains after the measurement.
    type Post;

    fn probabilities(&self, delta: f64) -> [f64; 2];

    /// Post-measurement state for `outcome`; `None` for a zero-weight branch.
    fn collapse(&self, delta: f64, outcome: bool) -> Option<Self::Post>;

    /// Post state used when a reported outcome has zero weight.
    fn fallback(&self) -> Self::Post;
}

/// One qubit of a two-qubit state; the other qubit survives the measurement.
#[derive(Clone, Copy, Debug)]
pub struct QubitOf<'a> {
    pub state: &'a DensityMatrix2Q,
    pub qubit: Qubit,
}

impl MeasurementTarget for QubitOf<'_> {
    type Post = DensityMatrix1Q;

    fn probabilities(&self, delta: f64) -> [f64; 2] {
        self.state.equatorial_probabilities(self.qubit, delta)
    }

    fn collapse(&self, delta: f64, outcome: bool) -> Option<DensityMatrix1Q> {
        self.state.collapse(self.qubit, delta, outcome)
    }

    fn fallback(&self) -> DensityMatrix1Q {
        DensityMatrix1Q::maximally_mixed()
    }
}

impl MeasurementTarget for DensityMatrix1Q {
    type Post = ();

    fn probabilities(&self, delta: f64) -> [f64; 2] {
        self.equatorial_probabilities(delta)
    }

    fn collapse(&self, _delta: f64, outcome: bool) -> Option<()> {
        (self.equatorial_probabilities(_delta)[outcome as usize] >= crate::qmath::ZERO_PROB).then_some(())
    }

    fn fallback(&self) {}
}

/// Server's measurement of `qubit` at `delta_effective` (which already
/// contains station errors), filtered through its strategy. Returns the
/// reported outcome and the post-measurement state.
pub fn server_measure<T: MeasurementTarget, R: Rng + ?Sized>(
    behavior: &ServerBehavior,
    target: &T,
    qubit: Qubit,
    delta_effective: f64,
    rng: &mut R,
) -> Result<(bool, T::Post)> {
    let honest = |delta: f64, rng: &mut R| -> Result<(bool, T::Post)> {
        let probs = target.probabilities(delta);
        let outcome = sample_branch(probs, rng)?;
        let post = target
            .collapse(delta, outcome)
            .ok_or(Error::DegenerateMeasurement(probs[0], probs[1]))?;
        Ok((outcome, post))
    };
    match behavior {
        ServerBehavior::Honest | ServerBehavior::StateReplace { .. } => honest(delta_effective, rng),
        ServerBehavior::FixedOutcome { q1, q2 } => {
            let fixed = match qubit {
                Qubit::One => *q1,
                Qubit::Two => *q2,
            };
            match fixed {
                Some(bit) => {
                    let post = target
                        .collapse(delta_effective, bit)
                        .unwrap_or_else(|| target.fallback());
                    Ok((bit, post))
                }
                None => honest(delta_effective, rng),
            }
        }
        ServerBehavior::OutcomeFlip { q1, q2 } => {
            let p = match qubit {
                Qubit::One => *q1,
                Qubit::Two => *q2,
            };
            let (outcome, post) = honest(delta_effective, rng)?;
            let flip = rng.random::<f64>() < p;
            Ok((outcome ^ flip, post))
        }
        ServerBehavior::AngleTamper { .. } => {
            honest(delta_effective + behavior.angle_offset(qubit).radians(), rng)
        }
    }
}
