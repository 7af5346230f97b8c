//! Dense complex linear algebra and quantum-information primitives at
//! dimensions 2 and 4.
//!
//! Basis ordering for two qubits is `|00>, |01>, |10>, |11>` with qubit 1 as
//! the most significant (left) tensor factor. Equatorial measurements use the
//! observable `M(d) = cos(d) X + sin(d) Y`; outcome `0` is the `+1`
//! eigenvector `(|0> + e^{id}|1>)/sqrt(2)`.

use nalgebra::{Matrix2, Matrix4, SMatrix, SVector, SymmetricEigen, Vector2, Vector4};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Mul;

use crate::error::{Error, Result};

pub use num_complex::Complex64 as Complex;

/// Tolerance on Hermiticity, trace and normalization of states.
pub const STATE_TOL: f64 = 1e-12;
/// Eigenvalues above `-EIGEN_CLAMP` are treated as round-off and clamped to 0.
pub const EIGEN_CLAMP: f64 = 1e-9;
/// Branch probabilities below this are never sampled.
pub const ZERO_PROB: f64 = 1e-15;
/// Eigenvalues below this are zeroed before square roots, where round-off of
/// order 1e-16 would otherwise grow to 1e-8.
pub const SQRT_FLOOR: f64 = 1e-13;

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

#[inline]
fn cis(phase: f64) -> Complex {
    Complex::from_polar(1.0, phase)
}

/// One of the two qubits of the resource state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Qubit {
    One,
    Two,
}

impl Qubit {
    pub fn other(self) -> Qubit {
        match self {
            Qubit::One => Qubit::Two,
            Qubit::Two => Qubit::One,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Qubit::One => 0,
            Qubit::Two => 1,
        }
    }
}

/// Hermitian eigendecomposition, available for the dimensions this crate uses.
pub trait HermitianEigen<const N: usize> {
    fn eigh(m: &SMatrix<Complex, N, N>) -> (SVector<f64, N>, SMatrix<Complex, N, N>);
}

/// Marker for a supported Hilbert-space dimension.
pub struct Dim<const N: usize>;

macro_rules! impl_eigen {
    ($($n:literal),*) => {$(
        impl HermitianEigen<$n> for Dim<$n> {
            fn eigh(m: &SMatrix<Complex, $n, $n>) -> (SVector<f64, $n>, SMatrix<Complex, $n, $n>) {
                let e = SymmetricEigen::new(*m);
                (e.eigenvalues, e.eigenvectors)
            }
        }
    )*};
}
impl_eigen!(2, 4);

fn max_abs<const N: usize>(m: &SMatrix<Complex, N, N>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn all_finite<const N: usize>(m: &SMatrix<Complex, N, N>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

// ---------------------------------------------------------------------------
// Unitaries

/// A unitary on `N`-dimensional Hilbert space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary<const N: usize>(SMatrix<Complex, N, N>);

pub type Unitary2 = Unitary<2>;
pub type Unitary4 = Unitary<4>;

impl<const N: usize> Unitary<N> {
    /// Wraps `m` after checking `U^dagger U = I` within [`STATE_TOL`].
    pub fn from_matrix(m: SMatrix<Complex, N, N>) -> Result<Self> {
        if !all_finite(&m) {
            return Err(Error::NonFinite("unitary"));
        }
        let dev = max_abs(&(m.adjoint() * m - SMatrix::<Complex, N, N>::identity()));
        if dev > STATE_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Unitary(m))
    }

    pub fn identity() -> Self {
        Unitary(SMatrix::identity())
    }

    pub fn matrix(&self) -> &SMatrix<Complex, N, N> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Unitary(self.0.adjoint())
    }

    /// Largest entry of `U^dagger U - I`.
    pub fn unitarity_defect(&self) -> f64 {
        max_abs(&(self.0.adjoint() * self.0 - SMatrix::<Complex, N, N>::identity()))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        max_abs(&(self.0 - other.0)) <= tol
    }
}

impl<const N: usize> Mul for Unitary<N> {
    type Output = Unitary<N>;
    fn mul(self, rhs: Self) -> Self {
        Unitary(self.0 * rhs.0)
    }
}

/// `Rz(theta) = diag(1, e^{i theta})`.
pub fn rz(theta: f64) -> Unitary2 {
    Unitary(Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), cis(theta)))
}

pub fn pauli_x() -> Unitary2 {
    Unitary(Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)))
}

pub fn pauli_y() -> Unitary2 {
    Unitary(Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)))
}

pub fn pauli_z() -> Unitary2 {
    rz(std::f64::consts::PI)
}

pub fn hadamard() -> Unitary2 {
    let h = c(FRAC_1_SQRT_2, 0.0);
    Unitary(Matrix2::new(h, h, h, -h))
}

pub fn cz() -> Unitary4 {
    let mut m = Matrix4::identity();
    m[(3, 3)] = c(-1.0, 0.0);
    Unitary(m)
}

/// Tensor product with `a` acting on qubit 1 (left factor).
pub fn kron(a: &Unitary2, b: &Unitary2) -> Unitary4 {
    Unitary(a.0.kronecker(&b.0).fixed_view::<4, 4>(0, 0).into_owned())
}

// ---------------------------------------------------------------------------
// Pure states

/// Two-qubit pure state vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState2Q(Vector4<Complex>);

impl PureState2Q {
    pub fn new(amp: [Complex; 4]) -> Result<Self> {
        let v = Vector4::from(amp);
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state vector"));
        }
        let norm2 = v.norm_squared();
        if (norm2 - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized(norm2));
        }
        Ok(PureState2Q(v))
    }

    /// Computational basis state `|ab>`.
    pub fn basis(a: bool, b: bool) -> Self {
        let mut v = Vector4::zeros();
        v[2 * a as usize + b as usize] = c(1.0, 0.0);
        PureState2Q(v)
    }

    pub fn amplitudes(&self) -> [Complex; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    pub fn vector(&self) -> &Vector4<Complex> {
        &self.0
    }

    pub fn apply(&self, u: &Unitary4) -> Self {
        PureState2Q(u.0 * self.0)
    }

    pub fn density(&self) -> DensityMatrix2Q {
        DensityMatrix(self.0 * self.0.adjoint())
    }

    /// `|<self|other>|`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.0.dotc(&other.0).norm()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.0 - other.0).iter().all(|z| z.norm() <= tol)
    }
}

/// The two-qubit graph state `CZ |+>|+> = (|00> + |01> + |10> - |11>) / 2`.
pub fn graph_state() -> PureState2Q {
    PureState2Q(Vector4::new(
        c(0.5, 0.0),
        c(0.5, 0.0),
        c(0.5, 0.0),
        c(-0.5, 0.0),
    ))
}

/// `(|00> + |11>) / sqrt(2)`.
pub fn bell_phi_plus() -> PureState2Q {
    let s = c(FRAC_1_SQRT_2, 0.0);
    PureState2Q(Vector4::new(s, c(0.0, 0.0), c(0.0, 0.0), s))
}

/// `(|00> - |11>) / sqrt(2)`.
pub fn bell_phi_minus() -> PureState2Q {
    let s = c(FRAC_1_SQRT_2, 0.0);
    PureState2Q(Vector4::new(s, c(0.0, 0.0), c(0.0, 0.0), -s))
}

// ---------------------------------------------------------------------------
// Density matrices

/// Hermitian, unit-trace, positive semi-definite matrix on `N` dimensions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix<const N: usize>(SMatrix<Complex, N, N>);

pub type DensityMatrix1Q = DensityMatrix<2>;
pub type DensityMatrix2Q = DensityMatrix<4>;

impl<const N: usize> DensityMatrix<N>
where
    Dim<N>: HermitianEigen<N>,
{
    /// Validates Hermiticity and trace within [`STATE_TOL`] and positivity
    /// within [`EIGEN_CLAMP`].
    pub fn from_matrix(m: SMatrix<Complex, N, N>) -> Result<Self> {
        if !all_finite(&m) {
            return Err(Error::NonFinite("density matrix"));
        }
        let herm = max_abs(&(m - m.adjoint()));
        if herm > STATE_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let rho = DensityMatrix(m);
        let min = rho.min_eigenvalue();
        if min < -EIGEN_CLAMP {
            return Err(Error::NotPsd(min));
        }
        Ok(rho)
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(SMatrix::identity() * c(1.0 / N as f64, 0.0))
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: [f64; N]) -> Result<Self> {
        let mut m = SMatrix::<Complex, N, N>::zeros();
        for (i, p) in populations.iter().enumerate() {
            m[(i, i)] = c(*p, 0.0);
        }
        Self::from_matrix(m)
    }

    pub fn matrix(&self) -> &SMatrix<Complex, N, N> {
        &self.0
    }

    pub fn trace(&self) -> Complex {
        self.0.trace()
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; N] {
        let (vals, _) = Dim::<N>::eigh(&self.hermitized());
        let mut out = [0.0; N];
        out.copy_from_slice(vals.as_slice());
        out.sort_by(f64::total_cmp);
        out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Checks every invariant at the crate tolerances.
    pub fn validate(&self) -> Result<()> {
        Self::from_matrix(self.0).map(|_| ())
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        max_abs(&(self.0 - other.0)) <= tol
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs(&(self.0 - other.0))
    }

    /// `U rho U^dagger`.
    pub fn evolve(&self, u: &Unitary<N>) -> Self {
        DensityMatrix(u.0 * self.0 * u.0.adjoint())
    }

    /// Convex combination `sum_i w_i rho_i`; weights must be a distribution.
    pub fn mixture(parts: &[(f64, Self)]) -> Result<Self> {
        check_distribution(parts.iter().map(|(w, _)| *w))?;
        Ok(Self::mixture_unchecked(parts.iter().map(|(w, r)| (*w, r))))
    }

    pub(crate) fn mixture_unchecked<'a, I>(parts: I) -> Self
    where
        I: IntoIterator<Item = (f64, &'a Self)>,
        Self: 'a,
    {
        let mut m = SMatrix::<Complex, N, N>::zeros();
        for (w, r) in parts {
            m += r.0 * c(w, 0.0);
        }
        DensityMatrix(m)
    }

    /// Uniform average of the given states.
    pub fn average<'a, I>(states: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        Self: 'a,
    {
        let mut m = SMatrix::<Complex, N, N>::zeros();
        let mut count = 0usize;
        for r in states {
            m += r.0;
            count += 1;
        }
        DensityMatrix(m / c(count.max(1) as f64, 0.0))
    }

    fn hermitized(&self) -> SMatrix<Complex, N, N> {
        (self.0 + self.0.adjoint()) * c(0.5, 0.0)
    }

    /// Eigen-decomposition with eigenvalues clamped at zero; errors on a
    /// genuinely negative eigenvalue.
    fn clamped_eigh(&self) -> Result<(SVector<f64, N>, SMatrix<Complex, N, N>)> {
        let (mut vals, vecs) = Dim::<N>::eigh(&self.hermitized());
        for v in vals.iter_mut() {
            if *v < -EIGEN_CLAMP {
                return Err(Error::NotPsd(*v));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok((vals, vecs))
    }

    fn psd_sqrt(&self) -> Result<SMatrix<Complex, N, N>> {
        let (vals, vecs) = self.clamped_eigh()?;
        let d = SMatrix::<Complex, N, N>::from_diagonal(&vals.map(|v| c(floored_sqrt(v), 0.0)));
        Ok(vecs * d * vecs.adjoint())
    }
}

impl DensityMatrix1Q {
    /// Single-qubit state from Bloch components.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_matrix(Matrix2::new(
            c((1.0 + z) / 2.0, 0.0),
            c(x / 2.0, -y / 2.0),
            c(x / 2.0, y / 2.0),
            c((1.0 - z) / 2.0, 0.0),
        ))
    }

    pub fn pure(amp: [Complex; 2]) -> Result<Self> {
        let v = Vector2::from(amp);
        let norm2 = v.norm_squared();
        if (norm2 - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized(norm2));
        }
        Ok(DensityMatrix(v * v.adjoint()))
    }

    /// `rho_a (x) rho_b` with `self` as qubit 1.
    pub fn tensor(&self, other: &DensityMatrix1Q) -> DensityMatrix2Q {
        DensityMatrix(self.0.kronecker(&other.0).fixed_view::<4, 4>(0, 0).into_owned())
    }

    /// Born probabilities of the two outcomes of `M(delta)`.
    pub fn equatorial_probabilities(&self, delta: f64) -> [f64; 2] {
        let p = [0, 1].map(|m| {
            let e = equatorial_eigvec(delta, m == 1);
            e.dotc(&(self.0 * e)).re
        });
        normalize_pair(p)
    }

    /// Measures `M(delta)`; returns the outcome and its probability.
    pub fn measure_equatorial<R: Rng + ?Sized>(&self, delta: f64, rng: &mut R) -> Result<(bool, f64)> {
        let probs = self.equatorial_probabilities(delta);
        let outcome = sample_branch(probs, rng)?;
        Ok((outcome, probs[outcome as usize]))
    }
}

impl DensityMatrix2Q {
    pub fn from_pure(psi: &PureState2Q) -> Self {
        psi.density()
    }

    /// Alias of [`DensityMatrix::evolve`] for two qubits.
    pub fn apply(&self, u: &Unitary4) -> Self {
        self.evolve(u)
    }

    /// Reduced state of `keep`.
    pub fn partial_trace(&self, keep: Qubit) -> DensityMatrix1Q {
        let mut out = Matrix2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                out[(i, j)] = (0..2)
                    .map(|k| match keep {
                        Qubit::One => self.0[(2 * i + k, 2 * j + k)],
                        Qubit::Two => self.0[(2 * k + i, 2 * k + j)],
                    })
                    .sum();
            }
        }
        DensityMatrix(out)
    }

    /// Unnormalized state of the unmeasured qubit after projecting `qubit`
    /// onto outcome `outcome` of `M(delta)`. Its trace is the Born probability.
    fn project_out(&self, qubit: Qubit, delta: f64, outcome: bool) -> Matrix2<Complex> {
        let e = equatorial_eigvec(delta, outcome);
        let mut out = Matrix2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = c(0.0, 0.0);
                for a in 0..2 {
                    for b in 0..2 {
                        let (r, s) = match qubit {
                            Qubit::One => (2 * a + i, 2 * b + j),
                            Qubit::Two => (2 * i + a, 2 * j + b),
                        };
                        acc += e[a].conj() * self.0[(r, s)] * e[b];
                    }
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Born probabilities of measuring `M(delta)` on `qubit`.
    pub fn equatorial_probabilities(&self, qubit: Qubit, delta: f64) -> [f64; 2] {
        self.partial_trace(qubit).equatorial_probabilities(delta)
    }

    /// Normalized state of the other qubit given `outcome`; `None` when the
    /// branch has vanishing probability.
    pub fn collapse(&self, qubit: Qubit, delta: f64, outcome: bool) -> Option<DensityMatrix1Q> {
        let m = self.project_out(qubit, delta, outcome);
        let p = m.trace().re;
        if p < ZERO_PROB {
            return None;
        }
        Some(DensityMatrix(m / c(p, 0.0)))
    }

    /// Projective measurement of `M(delta)` on `qubit`, sampled with Born
    /// probabilities. Returns the outcome, the normalized state of the
    /// remaining qubit and the probability of the sampled outcome.
    pub fn measure_equatorial<R: Rng + ?Sized>(
        &self,
        qubit: Qubit,
        delta: f64,
        rng: &mut R,
    ) -> Result<(bool, DensityMatrix1Q, f64)> {
        let probs = self.equatorial_probabilities(qubit, delta);
        let outcome = sample_branch(probs, rng)?;
        let post = self
            .collapse(qubit, delta, outcome)
            .ok_or(Error::DegenerateMeasurement(probs[0], probs[1]))?;
        Ok((outcome, post, probs[outcome as usize]))
    }
}

impl<const N: usize> Serialize for DensityMatrix<N> {
    /// Row-major nested arrays of `[re, im]` pairs.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..N)
            .map(|i| (0..N).map(|j| [self.0[(i, j)].re, self.0[(i, j)].im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de, const N: usize> Deserialize<'de> for DensityMatrix<N>
where
    Dim<N>: HermitianEigen<N>,
{
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        if rows.len() != N || rows.iter().any(|r| r.len() != N) {
            return Err(D::Error::custom(format!("expected a {N}x{N} matrix")));
        }
        let m = SMatrix::<Complex, N, N>::from_fn(|i, j| c(rows[i][j][0], rows[i][j][1]));
        DensityMatrix::from_matrix(m).map_err(D::Error::custom)
    }
}

/// Eigenvector of `M(delta)` for `outcome` (false = +1 eigenvalue).
pub fn equatorial_eigvec(delta: f64, outcome: bool) -> Vector2<Complex> {
    let sign = if outcome { -1.0 } else { 1.0 };
    Vector2::new(c(FRAC_1_SQRT_2, 0.0), cis(delta) * (sign * FRAC_1_SQRT_2))
}

fn normalize_pair(p: [f64; 2]) -> [f64; 2] {
    let p = p.map(|x| x.max(0.0));
    let total = p[0] + p[1];
    if total > 0.0 {
        p.map(|x| x / total)
    } else {
        p
    }
}

pub(crate) fn sample_branch<R: Rng + ?Sized>(probs: [f64; 2], rng: &mut R) -> Result<bool> {
    if probs[0] < ZERO_PROB && probs[1] < ZERO_PROB {
        return Err(Error::DegenerateMeasurement(probs[0], probs[1]));
    }
    if probs[1] < ZERO_PROB {
        return Ok(false);
    }
    if probs[0] < ZERO_PROB {
        return Ok(true);
    }
    let u: f64 = rng.random();
    Ok(u >= probs[0])
}

pub(crate) fn check_distribution<I: IntoIterator<Item = f64>>(weights: I) -> Result<()> {
    let mut total = 0.0;
    for w in weights {
        if !w.is_finite() || !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidDistribution(format!("weight {w} outside [0, 1]")));
        }
        total += w;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Information measures

/// Free-function form of [`DensityMatrix2Q::apply`].
pub fn apply(u: &Unitary4, rho: &DensityMatrix2Q) -> DensityMatrix2Q {
    rho.evolve(u)
}

/// Free-function form of [`DensityMatrix2Q::partial_trace`].
pub fn partial_trace(rho: &DensityMatrix2Q, keep: Qubit) -> DensityMatrix1Q {
    rho.partial_trace(keep)
}

/// Free-function form of [`DensityMatrix2Q::measure_equatorial`].
pub fn measure_equatorial<R: Rng + ?Sized>(
    rho: &DensityMatrix2Q,
    qubit: Qubit,
    delta: f64,
    rng: &mut R,
) -> Result<(bool, DensityMatrix1Q, f64)> {
    rho.measure_equatorial(qubit, delta, rng)
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(a) b sqrt(a)))^2`.
pub fn fidelity<const N: usize>(a: &DensityMatrix<N>, b: &DensityMatrix<N>) -> Result<f64>
where
    Dim<N>: HermitianEigen<N>,
{
    let sa = a.psd_sqrt()?;
    b.clamped_eigh()?;
    let inner = DensityMatrix(sa * b.0 * sa);
    let (vals, _) = Dim::<N>::eigh(&inner.hermitized());
    let mut root_sum = 0.0;
    for v in vals.iter() {
        if *v < -EIGEN_CLAMP {
            return Err(Error::NotPsd(*v));
        }
        root_sum += floored_sqrt(*v);
    }
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

fn floored_sqrt(v: f64) -> f64 {
    if v < SQRT_FLOOR {
        0.0
    } else {
        v.sqrt()
    }
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy<const N: usize>(rho: &DensityMatrix<N>) -> Result<f64>
where
    Dim<N>: HermitianEigen<N>,
{
    let (vals, _) = rho.clamped_eigh()?;
    Ok(vals
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0))
}

/// Holevo quantity `S(sum p_i rho_i) - sum p_i S(rho_i)` in bits.
pub fn holevo<const N: usize>(ensemble: &[(f64, DensityMatrix<N>)]) -> Result<f64>
where
    Dim<N>: HermitianEigen<N>,
{
    if ensemble.is_empty() {
        return Err(Error::InvalidDistribution("empty ensemble".into()));
    }
    check_distribution(ensemble.iter().map(|(p, _)| *p))?;
    let avg = DensityMatrix::mixture_unchecked(ensemble.iter().map(|(p, r)| (*p, r)));
    let mut chi = von_neumann_entropy(&avg)?;
    for (p, r) in ensemble {
        chi -= p * von_neumann_entropy(r)?;
    }
    if chi < 0.0 && chi > -EIGEN_CLAMP {
        chi = 0.0;
    }
    Ok(chi)
}
