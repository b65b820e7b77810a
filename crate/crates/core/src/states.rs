//! Two-qubit states, entanglement and fidelity measures, input
//! classification, and random state generation.
//!
//! Amplitudes `c₁…c₄` belong to `|00⟩, |01⟩, |10⟩, |11⟩`. Pure states are
//! compared through fidelity, never amplitude by amplitude, because the maps
//! introduce physically irrelevant global phases.

use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{c, is_hermitian, is_psd, CMatrix, CVector, SqrtExt, C64, HERMITIAN_TOL, PSD_TOL};

/// Tolerance on `Σ|cᵢ|² = 1` and `Tr ρ = 1`.
pub const NORM_TOL: f64 = 1e-12;
/// Default tolerance for [`classify_input`].
pub const CLASSIFY_TOL: f64 = 1e-10;
/// Tolerance when checking that local operations are unitary.
pub const UNITARY_TOL: f64 = 1e-10;
/// Weight below which a post-selected state counts as absent.
pub const FAILURE_THRESHOLD: f64 = 1e-15;

/// Pure two-qubit state, possibly unnormalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState2Q {
    amps: [C64; 4],
}

impl PureState2Q {
    pub fn new(amps: [C64; 4]) -> Result<Self> {
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { amps })
    }

    pub fn from_real(amps: [f64; 4]) -> Result<Self> {
        Self::new(amps.map(|x| c(x, 0.0)))
    }

    /// Like [`new`](Self::new) but also requires `Σ|cᵢ|² = 1`.
    pub fn normalized_new(amps: [C64; 4]) -> Result<Self> {
        let s = Self::new(amps)?;
        s.require_normalized()?;
        Ok(s)
    }

    pub fn amplitudes(&self) -> [C64; 4] {
        self.amps
    }

    pub fn c1(&self) -> C64 {
        self.amps[0]
    }
    pub fn c2(&self) -> C64 {
        self.amps[1]
    }
    pub fn c3(&self) -> C64 {
        self.amps[2]
    }
    pub fn c4(&self) -> C64 {
        self.amps[3]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized(self.norm_sqr()))
        }
    }

    /// Rescales to unit norm; a (numerically) zero vector has no direction.
    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n < FAILURE_THRESHOLD {
            return Err(Error::NoPostSelectedState(n));
        }
        let k = 1.0 / n.sqrt_libm();
        Ok(Self { amps: self.amps.map(|z| z * k) })
    }

    pub fn to_vector(&self) -> CVector {
        CVector::new(self.amps.to_vec()).expect("four finite amplitudes")
    }

    /// `|ψ⟩⟨ψ|` (unnormalized if the state is).
    pub fn projector(&self) -> CMatrix {
        self.to_vector().projector()
    }

    pub fn max_abs_diff(&self, other: &PureState2Q) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr()).fold(0.0, f64::max).sqrt_libm()
    }
}

impl fmt::Display for PureState2Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, z) in self.amps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}{:+}i", z.re, z.im)?;
        }
        f.write_str(")")
    }
}

/// Two-qubit density operator, possibly unnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Density2Q {
    m: CMatrix,
    normalized: bool,
}

impl Density2Q {
    /// A normalized density operator: Hermitian, PSD, unit trace.
    pub fn new(m: CMatrix) -> Result<Self> {
        let rho = Self::unnormalized(m)?;
        let t = rho.trace();
        if (t - 1.0).abs() > NORM_TOL {
            return Err(Error::TraceNotOne(t));
        }
        Ok(Self { normalized: true, ..rho })
    }

    /// A Hermitian PSD operator of arbitrary trace.
    pub fn unnormalized(m: CMatrix) -> Result<Self> {
        if m.dim() != 4 {
            return Err(Error::DimensionMismatch { left: m.dim(), right: 4 });
        }
        if !is_hermitian(&m, HERMITIAN_TOL) {
            return Err(Error::NotHermitian(m.hermitian_deviation()));
        }
        if !is_psd(&m, PSD_TOL) {
            return Err(Error::NotPositive(crate::linalg::min_eigenvalue(&m).unwrap_or(f64::NAN)));
        }
        let normalized = (m.trace().re - 1.0).abs() <= NORM_TOL;
        Ok(Self { m, normalized })
    }

    /// Skips validation; used for outputs that are PSD by construction.
    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        let normalized = (m.trace().re - 1.0).abs() <= NORM_TOL;
        Self { m, normalized }
    }

    pub fn from_pure(s: &PureState2Q) -> Self {
        Self::from_matrix_unchecked(s.projector())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::TraceNotOne(self.trace()))
        }
    }

    pub fn normalize(&self) -> Result<Self> {
        let t = self.trace();
        if t < FAILURE_THRESHOLD {
            return Err(Error::NoPostSelectedState(t));
        }
        Ok(Self { m: self.m.scale_real(1.0 / t), normalized: true })
    }

    /// `(1 − ε)·self + ε·other`.
    pub fn mix(&self, other: &Density2Q, epsilon: f64) -> Density2Q {
        let m = &self.m.scale_real(1.0 - epsilon) + &other.m.scale_real(epsilon);
        Self::from_matrix_unchecked(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus];

    pub fn state(self) -> PureState2Q {
        let r = FRAC_1_SQRT_2;
        let amps = match self {
            BellState::PhiPlus => [r, 0.0, 0.0, r],
            BellState::PhiMinus => [r, 0.0, 0.0, -r],
            BellState::PsiPlus => [0.0, r, r, 0.0],
            BellState::PsiMinus => [0.0, r, -r, 0.0],
        };
        PureState2Q::from_real(amps).expect("finite")
    }

    pub fn name(self) -> &'static str {
        match self {
            BellState::PhiPlus => "Phi+",
            BellState::PhiMinus => "Phi-",
            BellState::PsiPlus => "Psi+",
            BellState::PsiMinus => "Psi-",
        }
    }
}

/// `C = 2|c₁c₄ − c₂c₃|` for a normalized pure state.
pub fn concurrence_pure(s: &PureState2Q) -> Result<f64> {
    s.require_normalized()?;
    Ok(2.0 * (s.c1() * s.c4() - s.c2() * s.c3()).norm())
}

/// `|⟨a|b⟩|² / (‖a‖²‖b‖²)`: insensitive to norms and global phases.
pub fn overlap(a: &PureState2Q, b: &PureState2Q) -> f64 {
    let ip: C64 = a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum();
    ip.norm_sqr() / (a.norm_sqr() * b.norm_sqr())
}

/// `⟨t|ρ|t⟩` after normalizing `ρ` to unit trace.
pub fn fidelity_with_pure(rho: &Density2Q, target: &PureState2Q) -> Result<f64> {
    target.require_normalized()?;
    let rho = rho.normalize()?;
    let t = target.to_vector();
    let rt = rho.matrix().mul_vec(&t);
    Ok(t.inner(&rt).re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputClass {
    GenericEntangled,
    /// `c₁c₄ = c₂c₃` (zero concurrence) but not a blind spot.
    SeparableNonBlind,
    /// `c₁c₄ = −c₂c₃` with nonzero entanglement.
    BlindSpotEntangled,
    /// Both conditions hold: at least one qubit is in a basis state.
    BlindSpotSeparable,
}

impl InputClass {
    pub fn name(self) -> &'static str {
        match self {
            InputClass::GenericEntangled => "GenericEntangled",
            InputClass::SeparableNonBlind => "SeparableNonBlind",
            InputClass::BlindSpotEntangled => "BlindSpotEntangled",
            InputClass::BlindSpotSeparable => "BlindSpotSeparable",
        }
    }

    pub fn is_separable(self) -> bool {
        matches!(self, InputClass::SeparableNonBlind | InputClass::BlindSpotSeparable)
    }
}

impl fmt::Display for InputClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub class: InputClass,
    /// `|c₁c₄ − c₂c₃|`
    pub residual_minus: f64,
    /// `|c₁c₄ + c₂c₃|`
    pub residual_plus: f64,
}

pub fn classify_input(s: &PureState2Q, tol: f64) -> Classification {
    let p14 = s.c1() * s.c4();
    let p23 = s.c2() * s.c3();
    let residual_minus = (p14 - p23).norm();
    let residual_plus = (p14 + p23).norm();
    let class = if p14.norm() <= tol && p23.norm() <= tol {
        InputClass::BlindSpotSeparable
    } else if residual_minus <= tol {
        InputClass::SeparableNonBlind
    } else if residual_plus <= tol {
        InputClass::BlindSpotEntangled
    } else {
        InputClass::GenericEntangled
    };
    Classification { class, residual_minus, residual_plus }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    /// `I/4`
    White,
    /// Diagonal part of the base projector.
    Dephasing,
    /// `WW†/Tr(WW†)` with `W` a complex Gaussian 4 × 4 matrix.
    Ginibre,
}

impl NoiseKind {
    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::White => "white",
            NoiseKind::Dephasing => "dephasing",
            NoiseKind::Ginibre => "ginibre",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    epsilon: f64,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, epsilon: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::EpsilonOutOfRange(epsilon));
        }
        Ok(Self { kind, epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-uniform pure state.
pub fn random_pure<R: Rng + ?Sized>(rng: &mut R) -> PureState2Q {
    loop {
        let amps: [C64; 4] = core::array::from_fn(|_| complex_gaussian(rng));
        if let Ok(s) = (PureState2Q { amps }).normalize() {
            return s;
        }
    }
}

/// Haar-random single-qubit unitary: QR of a complex Ginibre matrix with
/// the diagonal of `R` made positive.
pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
    loop {
        let a = [complex_gaussian(rng), complex_gaussian(rng)];
        let b = [complex_gaussian(rng), complex_gaussian(rng)];
        let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt_libm();
        if na < 1e-12 {
            continue;
        }
        let q0 = [a[0] / na, a[1] / na];
        let proj = q0[0].conj() * b[0] + q0[1].conj() * b[1];
        let r = [b[0] - q0[0] * proj, b[1] - q0[1] * proj];
        let nr = (r[0].norm_sqr() + r[1].norm_sqr()).sqrt_libm();
        if nr < 1e-12 {
            continue;
        }
        let q1 = [r[0] / nr, r[1] / nr];
        return CMatrix::from_rows([[q0[0], q1[0]], [q0[1], q1[1]]]).expect("2x2");
    }
}

/// The noise operator `ρ_err` of a model for a given base state.
pub fn noise_operator<R: Rng + ?Sized>(kind: NoiseKind, base: &PureState2Q, rng: &mut R) -> Density2Q {
    let m = match kind {
        NoiseKind::White => CMatrix::identity(4).expect("4x4").scale_real(0.25),
        NoiseKind::Dephasing => {
            let p = base.projector();
            CMatrix::diagonal_matrix(&p.diagonal()).expect("4x4")
        }
        NoiseKind::Ginibre => {
            let w = CMatrix::from_fn(4, |_, _| complex_gaussian(rng));
            let ww = &w * &w.dagger();
            let t = ww.trace().re;
            ww.scale_real(1.0 / t)
        }
    };
    Density2Q::from_matrix_unchecked(m)
}

/// `(1 − ε)|base⟩⟨base| + ε·ρ_err`.
pub fn random_density<R: Rng + ?Sized>(model: &NoiseModel, base: &PureState2Q, rng: &mut R) -> Result<Density2Q> {
    base.require_normalized()?;
    let err = noise_operator(model.kind, base, rng);
    Ok(Density2Q::from_pure(base).mix(&err, model.epsilon))
}

/// Local unitaries `uA ⊗ uB` applied to a two-qubit state.
pub trait LocalPair: Sized {
    fn apply_local_pair(&self, ua: &CMatrix, ub: &CMatrix) -> Result<Self>;
}

fn local_operator(ua: &CMatrix, ub: &CMatrix) -> Result<CMatrix> {
    for u in [ua, ub] {
        if u.dim() != 2 {
            return Err(Error::DimensionMismatch { left: u.dim(), right: 2 });
        }
        let dev = u.unitary_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
    }
    ua.kron(ub)
}

impl LocalPair for PureState2Q {
    fn apply_local_pair(&self, ua: &CMatrix, ub: &CMatrix) -> Result<Self> {
        let v = local_operator(ua, ub)?.mul_vec(&self.to_vector());
        let s = v.as_slice();
        PureState2Q::new([s[0], s[1], s[2], s[3]])
    }
}

impl LocalPair for Density2Q {
    fn apply_local_pair(&self, ua: &CMatrix, ub: &CMatrix) -> Result<Self> {
        let u = local_operator(ua, ub)?;
        Ok(Density2Q::from_matrix_unchecked(self.m.conjugate_by(&u)))
    }
}
