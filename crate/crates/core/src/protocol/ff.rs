//! Bit-level model of the feed-forward electronics that pick the second
//! measurement basis once the first photon has been detected.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::angle::Angle8;
use crate::error::{Error, Result};

/// Pockels-cell drive level `v2v1v0`; at most one line is high.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VoltageCode {
    #[serde(rename = "000")]
    V000,
    #[serde(rename = "001")]
    V001,
    #[serde(rename = "010")]
    V010,
    #[serde(rename = "100")]
    V100,
}

impl VoltageCode {
    /// Phase the cell imprints at this drive level.
    pub fn pc_phase(self) -> Angle8 {
        match self {
            VoltageCode::V000 => Angle8::ZERO,
            VoltageCode::V001 => Angle8::new(1),
            VoltageCode::V010 => Angle8::new(2),
            VoltageCode::V100 => Angle8::new(3),
        }
    }

    /// Lines `[v2, v1, v0]`.
    pub fn lines(self) -> [bool; 3] {
        match self {
            VoltageCode::V000 => [false, false, false],
            VoltageCode::V001 => [false, false, true],
            VoltageCode::V010 => [false, true, false],
            VoltageCode::V100 => [true, false, false],
        }
    }
}

impl fmt::Display for VoltageCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.lines();
        write!(f, "{}{}{}", a as u8, b as u8, c as u8)
    }
}

/// `delta2 -> (f, V)` for every angle, indexed by `delta2` in units of `pi/4`.
pub const FF_TABLE: [(bool, VoltageCode); 8] = [
    (false, VoltageCode::V000),
    (true, VoltageCode::V100),
    (true, VoltageCode::V010),
    (true, VoltageCode::V001),
    (true, VoltageCode::V000),
    (false, VoltageCode::V100),
    (false, VoltageCode::V010),
    (false, VoltageCode::V001),
];

/// Registers and detector lines presented to the feed-forward unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FFInput {
    pub a: Angle8,
    pub b: Angle8,
    pub r1: bool,
    /// Detector behind the `+` output of the first analyser fired (`m1 = 0`).
    pub m1_plus: bool,
    /// Detector behind the `-` output fired (`m1 = 1`).
    pub m1_minus: bool,
    /// High for test rounds: no adaptive sign.
    pub c: bool,
}

impl FFInput {
    /// Lines for a raw first outcome.
    pub fn detector(m1: bool) -> (bool, bool) {
        (!m1, m1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FFOutput {
    pub v: VoltageCode,
    pub f: bool,
    pub m1_true_plus: bool,
    pub m1_true_minus: bool,
    /// The basis angle the unit resolved, `A +- B`.
    pub delta2: Angle8,
}

impl FFOutput {
    pub fn m1_true(&self) -> bool {
        self.m1_true_minus
    }
}

/// Resolves `delta2 = (1 - c)(A + (-1)^{m1_true} B) + c (A + B)` and looks up
/// the drive code. A detector pair that is not one-hot is a fault.
pub fn ff_lookup(input: FFInput) -> Result<FFOutput> {
    let m1 = match (input.m1_plus, input.m1_minus) {
        (true, false) => false,
        (false, true) => true,
        (plus, minus) => return Err(Error::DetectorFault { plus, minus }),
    };
    let m1_true = m1 ^ input.r1;
    let delta2 = if input.c {
        input.a + input.b
    } else {
        input.a + input.b.signed(m1_true)
    };
    let (f, v) = FF_TABLE[delta2.units() as usize];
    Ok(FFOutput {
        v,
        f,
        m1_true_plus: !m1_true,
        m1_true_minus: m1_true,
        delta2,
    })
}
