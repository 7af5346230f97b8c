//! Brute-force reference model, written against plain complex arrays and the
//! textbook formulas so it shares no code with the simulator.

#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64 as C;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
use vbqc::{Algorithm, ClientSecrets, RoundType};

pub type Ket = [C; 4];

fn cis(t: f64) -> C {
    C::from_polar(1.0, t)
}

/// `CZ (H (x) H) |00>` multiplied out by hand.
pub fn graph_ket() -> Ket {
    let h = [[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]];
    let mut psi = [C::new(0.0, 0.0); 4];
    for a in 0..2 {
        for b in 0..2 {
            // column 0 of H (x) H, then the CZ sign on |11>
            let amp = h[a][0] * h[b][0] * if a == 1 && b == 1 { -1.0 } else { 1.0 };
            psi[2 * a + b] = C::new(amp, 0.0);
        }
    }
    psi
}

/// Applies the 2x2 matrix `m` to qubit `q` (0 = left factor).
pub fn apply1(psi: &Ket, q: usize, m: [[C; 2]; 2]) -> Ket {
    let mut out = [C::new(0.0, 0.0); 4];
    for idx in 0..4 {
        let bits = [(idx >> 1) & 1, idx & 1];
        for k in 0..2 {
            let mut src = bits;
            src[q] = k;
            out[idx] += m[bits[q]][k] * psi[2 * src[0] + src[1]];
        }
    }
    out
}

pub fn rz(t: f64) -> [[C; 2]; 2] {
    [[C::new(1.0, 0.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), cis(t)]]
}

pub fn x() -> [[C; 2]; 2] {
    [[C::new(0.0, 0.0), C::new(1.0, 0.0)], [C::new(1.0, 0.0), C::new(0.0, 0.0)]]
}

/// Both clients' masks, A first, with optional extra phase errors
/// `err[client][qubit]`.
pub fn masked(a: &ClientSecrets, b: &ClientSecrets, err: [[f64; 2]; 2]) -> Ket {
    let mut psi = graph_ket();
    for q in 0..2 {
        for (j, s) in [a, b].into_iter().enumerate() {
            if s.b[q] {
                psi = apply1(&psi, q, x());
            }
            psi = apply1(&psi, q, rz(s.theta[q].radians() + err[j][q]));
        }
    }
    psi
}

/// Amplitude vector of the `M(delta)` eigenvector for `outcome` (`0 <-> +1`).
fn eig(delta: f64, outcome: usize) -> [C; 2] {
    let s = if outcome == 0 { 1.0 } else { -1.0 };
    [C::new(FRAC_1_SQRT_2, 0.0), cis(delta) * s * FRAC_1_SQRT_2]
}

/// Joint probabilities `p[m1][m2]` of measuring qubit 1 at `d1` and then
/// qubit 2 at `d2(m1)`.
pub fn joint(psi: &Ket, d1: f64, d2: impl Fn(usize) -> f64) -> [[f64; 2]; 2] {
    let mut p = [[0.0; 2]; 2];
    for m1 in 0..2 {
        let e1 = eig(d1, m1);
        let e2s = [eig(d2(m1), 0), eig(d2(m1), 1)];
        for (m2, e2) in e2s.iter().enumerate() {
            let mut amp = C::new(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    amp += e1[i].conj() * e2[j].conj() * psi[2 * i + j];
                }
            }
            p[m1][m2] = amp.norm_sqr();
        }
    }
    p
}

/// Reference run of a round with explicit secrets: blind angles straight
/// from the masking algebra, second qubit measured directly at its angle.
/// Returns `P(m1_true, m2_true)`.
pub fn round_distribution(
    alg: &Algorithm,
    round_type: RoundType,
    a: &ClientSecrets,
    b: &ClientSecrets,
) -> [[f64; 2]; 2] {
    let units = |k: u8| k as f64 * FRAC_PI_4;
    let sgn = |bit: bool| if bit { -1.0 } else { 1.0 };
    let pi_if = |bit: bool| if bit { PI } else { 0.0 };
    let r = [a.r[0] ^ b.r[0], a.r[1] ^ b.r[1]];
    let tp = |i: usize, j: usize| {
        sgn(b.b[i]) * units(a.theta[i].units()) + units(b.theta[i].units()) + pi_if(a.b[j] ^ b.b[j])
    };
    let (phi, xbits) = match round_type {
        RoundType::Computation => ([units(alg.phi[0].units()), units(alg.phi[1].units())], alg.x),
        RoundType::Test => ([PI / 2.0; 2], [false; 2]),
    };
    let d1 = tp(0, 1) + pi_if(xbits[0]) + phi[0] + pi_if(r[0]);
    let adaptive = round_type == RoundType::Computation;
    let d2 = |m1: usize| {
        let m1_true = (m1 == 1) ^ r[0];
        let s = if adaptive { sgn(m1_true) } else { 1.0 };
        tp(1, 0) + pi_if(xbits[1]) + s * phi[1] + pi_if(r[1])
    };
    let raw = joint(&masked(a, b, [[0.0; 2]; 2]), d1, d2);
    let mut out = [[0.0; 2]; 2];
    for m1 in 0..2 {
        for m2 in 0..2 {
            out[m1 ^ r[0] as usize][m2 ^ r[1] as usize] += raw[m1][m2];
        }
    }
    out
}

/// Outcome of the unmasked pattern: measure `phi_1 + x_1 pi` then
/// `(-1)^{m1} phi_2 + x_2 pi` on the bare graph state. Returns `P(m2 = 1)`.
pub fn unmasked_output(alg: &Algorithm) -> f64 {
    let units = |k: u8| k as f64 * FRAC_PI_4;
    let pi_if = |bit: bool| if bit { PI } else { 0.0 };
    let d1 = units(alg.phi[0].units()) + pi_if(alg.x[0]);
    let d2 = |m1: usize| if m1 == 1 { -1.0 } else { 1.0 } * units(alg.phi[1].units()) + pi_if(alg.x[1]);
    let p = joint(&graph_ket(), d1, d2);
    p[0][1] + p[1][1]
}

/// Three-sigma band for a binomial proportion.
pub fn three_sigma(p: f64, n: usize) -> f64 {
    3.0 * (p * (1.0 - p) / n as f64).sqrt()
}
