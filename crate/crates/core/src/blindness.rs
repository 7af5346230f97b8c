//! What the server can learn: the states it receives averaged over the
//! clients' secret rotations, and the Holevo quantity of the ensemble.

use serde::{Deserialize, Serialize};

use crate::angle::Angle8;
use crate::error::{Error, Result};
use crate::qmath::{fidelity, holevo, kron, rz, DensityMatrix, DensityMatrix1Q, DensityMatrix2Q, Qubit, Unitary2};

/// Which first-qubit outcomes enter the single-qubit average.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conditioning {
    /// Both outcomes, weighted by their Born probabilities.
    #[default]
    Unconditioned,
    /// Only rounds where the first outcome was this bit.
    Outcome(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlindnessOptions {
    /// First-qubit basis for the single-qubit analysis.
    pub delta1: Angle8,
    pub conditioning: Conditioning,
    /// Average over all four client angles instead of two.
    pub full_averaging: bool,
}

impl Default for BlindnessOptions {
    fn default() -> Self {
        BlindnessOptions {
            delta1: Angle8::FRAC_5PI_4,
            conditioning: Conditioning::Unconditioned,
            full_averaging: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlindnessReport {
    pub avg_single_qubit: DensityMatrix1Q,
    #[serde(rename = "F_1q")]
    pub f_1q: f64,
    pub avg_two_qubit: DensityMatrix2Q,
    #[serde(rename = "F_2q")]
    pub f_2q: f64,
    pub chi: f64,
    pub ensemble_size: usize,
}

fn pair_rotation(a: Angle8, b: Angle8) -> crate::qmath::Unitary4 {
    kron(&rz(a.radians()), &rz(b.radians()))
}

/// Qubit-2 state after both clients rotate qubit 1 by every `(theta_1^A,
/// theta_1^B)` and the server measures it at `delta1`, averaged over the 64
/// combinations.
pub fn averaged_second_qubit(
    source: &DensityMatrix2Q,
    delta1: Angle8,
    conditioning: Conditioning,
) -> Result<DensityMatrix1Q> {
    let mut states = Vec::with_capacity(64);
    for ta in Angle8::all() {
        for tb in Angle8::all() {
            let u = kron(&(rz(tb.radians()) * rz(ta.radians())), &Unitary2::identity());
            let rho = source.apply(&u);
            let post = match conditioning {
                Conditioning::Unconditioned => {
                    let probs = rho.equatorial_probabilities(Qubit::One, delta1.radians());
                    let parts: Vec<_> = [false, true]
                        .into_iter()
                        .filter_map(|m| {
                            rho.collapse(Qubit::One, delta1.radians(), m)
                                .map(|s| (probs[m as usize], s))
                        })
                        .collect();
                    DensityMatrix::mixture(&parts)?
                }
                Conditioning::Outcome(m) => rho.collapse(Qubit::One, delta1.radians(), m).ok_or_else(|| {
                    let p = rho.equatorial_probabilities(Qubit::One, delta1.radians());
                    Error::DegenerateMeasurement(p[0], p[1])
                })?,
            };
            states.push(post);
        }
    }
    Ok(DensityMatrix::average(states.iter()))
}

/// Uniform average of `(Rz(theta_1^A) (x) Rz(theta_2^B)) rho (.)^dagger` over
/// all 64 angle pairs.
pub fn averaged_two_qubit(source: &DensityMatrix2Q) -> DensityMatrix2Q {
    let states = twirl_states(source);
    DensityMatrix::average(states.iter().map(|(_, _, s)| s))
}

/// Average over all four client angles, `8^4` combinations.
pub fn averaged_two_qubit_full(source: &DensityMatrix2Q) -> DensityMatrix2Q {
    let mut states = Vec::with_capacity(4096);
    for [a1, b1, a2, b2] in all_angle_quads() {
        let u = kron(
            &(rz(b1.radians()) * rz(a1.radians())),
            &(rz(b2.radians()) * rz(a2.radians())),
        );
        states.push(source.apply(&u));
    }
    DensityMatrix::average(states.iter())
}

fn all_angle_quads() -> impl Iterator<Item = [Angle8; 4]> {
    (0u16..4096).map(|k| [0, 3, 6, 9].map(|s| Angle8::new(((k >> s) & 7) as u8)))
}

/// The 64 rotated states, keyed by `(theta_1^A, theta_2^B)`.
pub fn twirl_states(source: &DensityMatrix2Q) -> Vec<(Angle8, Angle8, DensityMatrix2Q)> {
    Angle8::all()
        .flat_map(|a| Angle8::all().map(move |b| (a, b)))
        .map(|(a, b)| (a, b, source.apply(&pair_rotation(a, b))))
        .collect()
}

pub type AnglePair = (Angle8, Angle8);

/// The 16 groups of angle pairs related by `pi` shifts, labelled by the
/// representative with both codes in `0..4`.
pub fn holevo_groups() -> Vec<(AnglePair, [AnglePair; 4])> {
    let mut groups = Vec::with_capacity(16);
    for a in (0..4).map(Angle8::new) {
        for b in (0..4).map(Angle8::new) {
            groups.push((
                (a, b),
                [(a, b), (a, b.add_pi(true)), (a.add_pi(true), b), (a.add_pi(true), b.add_pi(true))],
            ));
        }
    }
    groups
}

/// Holevo quantity of the 16 equally likely group states.
pub fn holevo_protocol_ensemble(source: &DensityMatrix2Q) -> Result<f64> {
    let ensemble: Vec<_> = holevo_groups()
        .into_iter()
        .map(|(_, members)| {
            let states: Vec<_> = members.iter().map(|&(a, b)| source.apply(&pair_rotation(a, b))).collect();
            (1.0 / 16.0, DensityMatrix::average(states.iter()))
        })
        .collect();
    holevo(&ensemble)
}

pub fn blindness_report(source: &DensityMatrix2Q, opts: &BlindnessOptions) -> Result<BlindnessReport> {
    let avg_single_qubit = averaged_second_qubit(source, opts.delta1, opts.conditioning)?;
    let avg_two_qubit = if opts.full_averaging {
        averaged_two_qubit_full(source)
    } else {
        averaged_two_qubit(source)
    };
    Ok(BlindnessReport {
        f_1q: fidelity(&avg_single_qubit, &DensityMatrix1Q::maximally_mixed())?,
        f_2q: fidelity(&avg_two_qubit, &DensityMatrix2Q::maximally_mixed())?,
        avg_single_qubit,
        avg_two_qubit,
        chi: holevo_protocol_ensemble(source)?,
        ensemble_size: 16,
    })
}
