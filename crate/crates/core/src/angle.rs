//! Exact arithmetic on the eight-element angle set `{0, pi/4, ..., 7pi/4}`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::error::Error;

/// A multiple of `pi/4`, stored as an integer mod 8.
///
/// Serializes as the three-bit code `a2a1a0` used by the feed-forward
/// electronics, e.g. `pi/2` is `"010"`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle8(u8);

impl Angle8 {
    pub const ZERO: Angle8 = Angle8(0);
    pub const FRAC_PI_4: Angle8 = Angle8(1);
    pub const FRAC_PI_2: Angle8 = Angle8(2);
    pub const PI: Angle8 = Angle8(4);
    pub const FRAC_5PI_4: Angle8 = Angle8(5);

    /// Reduces `k` mod 8.
    pub const fn new(k: u8) -> Self {
        Angle8(k % 8)
    }

    pub fn from_units(k: i64) -> Self {
        Angle8(k.rem_euclid(8) as u8)
    }

    pub const fn units(self) -> u8 {
        self.0
    }

    pub fn radians(self) -> f64 {
        self.0 as f64 * FRAC_PI_4
    }

    /// `self + bit * pi`.
    pub fn add_pi(self, bit: bool) -> Self {
        Angle8((self.0 + 4 * bit as u8) % 8)
    }

    /// `(-1)^bit * self`.
    pub fn signed(self, bit: bool) -> Self {
        if bit {
            -self
        } else {
            self
        }
    }

    /// Bits `[a2, a1, a0]`, most significant first.
    pub fn code(self) -> [bool; 3] {
        [self.0 & 4 != 0, self.0 & 2 != 0, self.0 & 1 != 0]
    }

    pub fn from_code(bits: [bool; 3]) -> Self {
        Angle8((bits[0] as u8) << 2 | (bits[1] as u8) << 1 | bits[2] as u8)
    }

    pub fn all() -> impl Iterator<Item = Angle8> + Clone {
        (0..8).map(Angle8)
    }
}

impl Add for Angle8 {
    type Output = Angle8;
    fn add(self, rhs: Angle8) -> Angle8 {
        Angle8((self.0 + rhs.0) % 8)
    }
}

impl Sub for Angle8 {
    type Output = Angle8;
    fn sub(self, rhs: Angle8) -> Angle8 {
        self + (-rhs)
    }
}

impl Neg for Angle8 {
    type Output = Angle8;
    fn neg(self) -> Angle8 {
        Angle8((8 - self.0) % 8)
    }
}

/// `(a + b) mod 8`.
pub fn angle_add(a: Angle8, b: Angle8) -> Angle8 {
    a + b
}

/// `(-a) mod 8`.
pub fn angle_neg(a: Angle8) -> Angle8 {
    -a
}

/// `(a + 4 bit) mod 8`.
pub fn angle_add_pi(a: Angle8, bit: bool) -> Angle8 {
    a.add_pi(bit)
}

impl fmt::Display for Angle8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a2, a1, a0] = self.code();
        write!(f, "{}{}{}", a2 as u8, a1 as u8, a0 as u8)
    }
}

impl FromStr for Angle8 {
    type Err = Error;

    /// Accepts a three-bit code (`"101"`) or a bare unit count (`"5"`).
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.len() == 3 && s.bytes().all(|b| b == b'0' || b == b'1') {
            let b: Vec<bool> = s.bytes().map(|b| b == b'1').collect();
            return Ok(Angle8::from_code([b[0], b[1], b[2]]));
        }
        match s.parse::<u8>() {
            Ok(k) if k < 8 => Ok(Angle8(k)),
            _ => Err(Error::param("angle", format!("`{s}` is neither a 3-bit code nor 0..=7"))),
        }
    }
}

impl Serialize for Angle8 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Angle8 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
