//! The protocol roles and their classical bookkeeping: client secrets, the
//! TTP's blind-angle computation, the feed-forward emulator and the per-round
//! state machine.

mod ff;
mod round;
mod run;

pub use ff::{ff_lookup, FFInput, FFOutput, VoltageCode, FF_TABLE};
pub use round::{execute_round, run_round, Phase, Prepared, Q1Measured, Round, RoundOptions, RoundRecord, RoundSetup};
pub use run::{run_protocol, ProtocolConfig, Transcript};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::angle::Angle8;

/// Measurement angle used for both qubits in test rounds: the `Y (x) Y`
/// stabilizer of the graph state.
pub const TEST_PHI: Angle8 = Angle8::FRAC_PI_2;

/// One client's secret one-time pad for both qubits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClientSecrets {
    pub theta: [Angle8; 2],
    #[serde(with = "bits2")]
    pub b: [bool; 2],
    #[serde(with = "bits2")]
    pub r: [bool; 2],
}

impl ClientSecrets {
    /// Uniform draw of every field.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let theta = [Angle8::new(rng.random_range(0..8)), Angle8::new(rng.random_range(0..8))];
        let b = [rng.random(), rng.random()];
        let r = [rng.random(), rng.random()];
        ClientSecrets { theta, b, r }
    }

    /// Decodes a 10-bit index: per qubit 3 bits of theta, 1 of b, 1 of r.
    /// Handy for exhaustive enumeration.
    pub fn from_index(k: u32) -> Self {
        let q = |s: u32| {
            let bits = (k >> (5 * s)) & 0x1f;
            (Angle8::new((bits & 7) as u8), bits & 8 != 0, bits & 16 != 0)
        };
        let (t1, b1, r1) = q(0);
        let (t2, b2, r2) = q(1);
        ClientSecrets {
            theta: [t1, t2],
            b: [b1, b2],
            r: [r1, r2],
        }
    }

    /// Number of distinct values of [`ClientSecrets::from_index`].
    pub const COUNT: u32 = 1 << 10;
}

/// The clients' two-qubit measurement pattern and input bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Algorithm {
    pub phi: [Angle8; 2],
    #[serde(with = "bits2")]
    pub x: [bool; 2],
}

impl Algorithm {
    /// Pattern `{pi/2, pi/2}` with the given inputs.
    pub fn y_basis(x1: bool, x2: bool) -> Self {
        Algorithm {
            phi: [Angle8::FRAC_PI_2; 2],
            x: [x1, x2],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundType {
    Computation,
    Test,
}

impl RoundType {
    pub fn is_test(self) -> bool {
        self == RoundType::Test
    }
}

/// Which masking the clients apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolVariant {
    /// `Rz(theta) X^b` masking with compensated angles.
    #[default]
    Verifiable,
    /// Rotations only: every `b` is forced to zero.
    Baseline,
}

/// How the server realizes the second measurement basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SecondMeasurement {
    /// Pockels-cell phase from the feed-forward table, bit corrected by `f`.
    #[default]
    PockelsCell,
    /// Measure at `delta2` itself; `f` is recorded as 0.
    Direct,
}

/// Angles the TTP compensates for both clients' masks:
/// `theta'_1 = (-1)^{b_1^B} theta_1^A + theta_1^B + (b_2^A xor b_2^B) pi`, and
/// symmetrically for qubit 2.
pub fn theta_prime(a: &ClientSecrets, b: &ClientSecrets) -> [Angle8; 2] {
    let one = |i: usize, j: usize| {
        (a.theta[i].signed(b.b[i]) + b.theta[i]).add_pi(a.b[j] ^ b.b[j])
    };
    [one(0, 1), one(1, 0)]
}

/// First blind angle; the input bit is left out in test rounds.
pub fn delta1(theta_prime_1: Angle8, alg: &Algorithm, r1: bool, round_type: RoundType) -> Angle8 {
    match round_type {
        RoundType::Computation => (theta_prime_1 + alg.phi[0]).add_pi(alg.x[0] ^ r1),
        RoundType::Test => (theta_prime_1 + TEST_PHI).add_pi(r1),
    }
}

/// `A` register of the feed-forward unit: everything in `delta2` except the
/// adaptive `phi_2` term.
pub fn delta2_offset(theta_prime_2: Angle8, alg: &Algorithm, r2: bool, round_type: RoundType) -> Angle8 {
    match round_type {
        RoundType::Computation => theta_prime_2.add_pi(alg.x[1] ^ r2),
        RoundType::Test => theta_prime_2.add_pi(r2),
    }
}

/// Second-angle branches `(delta2+, delta2-)`: `+` is taken when the
/// corrected first outcome is 0. Test rounds have a single fixed branch.
pub fn delta2_branches(theta_prime_2: Angle8, alg: &Algorithm, r2: bool, round_type: RoundType) -> (Angle8, Angle8) {
    let a = delta2_offset(theta_prime_2, alg, r2, round_type);
    match round_type {
        RoundType::Computation => (a + alg.phi[1], a - alg.phi[1]),
        RoundType::Test => (a + TEST_PHI, a + TEST_PHI),
    }
}

/// Serializes a bit as the integer 0 or 1.
pub(crate) mod bit {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(b: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(*b as u8)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(false),
            1 => Ok(true),
            v => Err(serde::de::Error::custom(format!("bit must be 0 or 1, got {v}"))),
        }
    }
}

pub(crate) mod bits2 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(b: &[bool; 2], s: S) -> Result<S::Ok, S::Error> {
        [b[0] as u8, b[1] as u8].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[bool; 2], D::Error> {
        let v = <[u8; 2]>::deserialize(d)?;
        let one = |x: u8| match x {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(serde::de::Error::custom(format!("bit must be 0 or 1, got {x}"))),
        };
        Ok([one(v[0])?, one(v[1])?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn secrets(theta: [u8; 2], b: [bool; 2]) -> ClientSecrets {
        ClientSecrets {
            theta: theta.map(Angle8::new),
            b,
            r: [false; 2],
        }
    }

    #[test]
    fn theta_prime_examples() {
        let a = secrets([1, 0], [false, false]);
        let b = secrets([2, 0], [false, false]);
        assert_eq!(theta_prime(&a, &b)[0], Angle8::new(3));

        let a = secrets([1, 0], [false, true]);
        let b = secrets([2, 0], [true, false]);
        assert_eq!(theta_prime(&a, &b)[0], Angle8::new(5));
    }

    #[test]
    fn theta_prime_is_swap_symmetric() {
        for k in (0..ClientSecrets::COUNT).step_by(7) {
            let a = ClientSecrets::from_index(k);
            let b = ClientSecrets::from_index(ClientSecrets::COUNT - 1 - k);
            let swap = |s: ClientSecrets| ClientSecrets {
                theta: [s.theta[1], s.theta[0]],
                b: [s.b[1], s.b[0]],
                r: [s.r[1], s.r[0]],
            };
            let t = theta_prime(&a, &b);
            let ts = theta_prime(&swap(a), &swap(b));
            assert_eq!(t, [ts[1], ts[0]]);
        }
    }

    #[test]
    fn delta1_examples() {
        let alg = Algorithm::y_basis(false, false);
        assert_eq!(delta1(Angle8::ZERO, &alg, false, RoundType::Computation), Angle8::new(2));
        let alg = Algorithm::y_basis(true, false);
        assert_eq!(delta1(Angle8::ZERO, &alg, true, RoundType::Computation), Angle8::new(2));
        assert_eq!(delta1(Angle8::new(5), &alg, false, RoundType::Test), Angle8::new(7));
    }

    #[test]
    fn delta2_examples() {
        let alg = Algorithm::y_basis(false, false);
        assert_eq!(
            delta2_branches(Angle8::ZERO, &alg, false, RoundType::Computation),
            (Angle8::new(2), Angle8::new(6))
        );
        assert_eq!(
            delta2_branches(Angle8::ZERO, &alg, false, RoundType::Test),
            (Angle8::new(2), Angle8::new(2))
        );
        let alg = Algorithm::y_basis(false, true);
        assert_eq!(
            delta2_branches(Angle8::new(3), &alg, true, RoundType::Computation),
            (Angle8::new(5), Angle8::new(1))
        );
    }

    #[test]
    fn index_decoding_covers_everything() {
        let all: std::collections::HashSet<_> = (0..ClientSecrets::COUNT).map(ClientSecrets::from_index).collect();
        assert_eq!(all.len(), ClientSecrets::COUNT as usize);
    }

    #[test]
    fn secrets_json_uses_bits() {
        let s = ClientSecrets::from_index(0b11010_01011);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"theta":["011","010"],"b":[1,1],"r":[0,1]}"#);
        assert_eq!(serde_json::from_str::<ClientSecrets>(&json).unwrap(), s);
    }
}
