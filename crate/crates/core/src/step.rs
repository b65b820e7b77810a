//! One core step: both parties apply `U±` to their two qubits, measure the
//! second pair, and keep the first pair on outcome `(0, 0)`.
//!
//! Each map exists twice. The closed forms work directly on the two-qubit
//! amplitudes or matrix elements. The oracle builds the four-qubit state
//! `ψ⁽¹³⁾ ⊗ ψ⁽²⁴⁾` (or `ρ⁽¹³⁾ ⊗ ρ⁽²⁴⁾`), reorders it to `(1, 2, 3, 4)`,
//! applies `U±⁽¹²⁾ ⊗ U±⁽³⁴⁾` and projects qubits 2 and 4 onto `|0⟩`. The
//! oracle is the reference whenever the two disagree.
//!
//! Outputs are unnormalized. Their squared norm (pure) or trace (mixed) is
//! the success probability of the step.

use crate::error::Result;
use crate::gates::{u_pm, Sign};
use crate::linalg::{c, CMatrix, ProjectAncillas, QubitOrder, Reorder, C64, ZERO};
use crate::states::{Density2Q, PureState2Q, FAILURE_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    ClosedForm,
    Oracle,
}

/// Unnormalized post-selected state of one step and its probability.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome<S> {
    pub state: S,
    pub success_probability: f64,
    pub sign: Sign,
    pub representation: Representation,
}

impl<S> StepOutcome<S> {
    /// The `(0, 0)` outcome never occurs (probability below 1e-15).
    pub fn is_failure(&self) -> bool {
        self.success_probability < FAILURE_THRESHOLD
    }
}

impl StepOutcome<PureState2Q> {
    pub fn normalized_state(&self) -> Result<PureState2Q> {
        self.state.normalize()
    }
}

impl StepOutcome<Density2Q> {
    pub fn normalized_state(&self) -> Result<Density2Q> {
        self.state.normalize()
    }
}

/// `c₁′ = c₁c₄ ± c₂c₃`, `c₂′ = c₃′ = 0`, `c₄′ = c₁c₄ ∓ c₂c₃`.
///
/// Homogeneous of degree two, so it also accepts unnormalized input.
pub fn map_amplitudes(s: &PureState2Q, sign: Sign) -> PureState2Q {
    let p14 = s.c1() * s.c4();
    let p23 = s.c2() * s.c3() * sign.value();
    PureState2Q::new([p14 + p23, ZERO, ZERO, p14 - p23]).expect("products of finite values")
}

pub fn step_pure_closed(s: &PureState2Q, sign: Sign) -> Result<StepOutcome<PureState2Q>> {
    s.require_normalized()?;
    let state = map_amplitudes(s, sign);
    Ok(StepOutcome { success_probability: state.norm_sqr(), state, sign, representation: Representation::ClosedForm })
}

fn pair_order() -> (QubitOrder, QubitOrder) {
    (QubitOrder::new(&[1, 3, 2, 4]).expect("valid order"), QubitOrder::natural(4).expect("valid order"))
}

fn local_unitary(sign: Sign) -> CMatrix {
    let u = u_pm(sign).m;
    u.kron(&u).expect("16x16")
}

/// Brute-force step with pair `(1, 3)` in `first` and pair `(2, 4)` in
/// `second`. The inputs may differ and need not be normalized.
pub fn oracle_pure_pair(first: &PureState2Q, second: &PureState2Q, sign: Sign) -> PureState2Q {
    let (from, to) = pair_order();
    let joint = first.to_vector().kron(&second.to_vector()).and_then(|v| v.reorder(&from, &to)).expect("4 ⊗ 4 = 16");
    let kept = local_unitary(sign).mul_vec(&joint).project_ancillas_to_zero().expect("16-dimensional");
    let k = kept.as_slice();
    PureState2Q::new([k[0], k[1], k[2], k[3]]).expect("finite")
}

pub fn step_pure_oracle(s: &PureState2Q, sign: Sign) -> Result<StepOutcome<PureState2Q>> {
    s.require_normalized()?;
    let state = oracle_pure_pair(s, s, sign);
    Ok(StepOutcome { success_probability: state.norm_sqr(), state, sign, representation: Representation::Oracle })
}

/// The nonzero elements of the post-selected X-state and the intermediate
/// quantities they are built from.
///
/// ```text
/// a± = (ρ₁₁ρ₄₄ ± ρ₂₂ρ₃₃)/2
/// b± = (|ρ₁₄|² ± |ρ₂₃|²)/2
/// d± = ρ₁₂ρ₃₄* ± ρ₁₃ρ₂₄*
///
/// ρ′₁₁ = a₊ + b₊ + s·Re d₊      ρ′₁₄ = a₋ + b₋ − s·i Im d₊
/// ρ′₂₂ = a₊ − b₊ − s·Re d₋      ρ′₂₃ = a₋ − b₋ + s·i Im d₋
/// ρ′₃₃ = a₊ − b₊ + s·Re d₋      ρ′₄₄ = a₊ + b₊ − s·Re d₊
/// ```
///
/// with `s = +1` for `U+` and `s = −1` for `U−` (the last term of every
/// element changes sign).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateElements {
    pub sign: Sign,
    pub a_plus: f64,
    pub a_minus: f64,
    pub b_plus: f64,
    pub b_minus: f64,
    pub d_plus: C64,
    pub d_minus: C64,
    pub rho11: f64,
    pub rho14: C64,
    pub rho22: f64,
    pub rho23: C64,
    pub rho33: f64,
    pub rho44: f64,
}

impl XStateElements {
    /// Accepts any Hermitian 4 × 4 matrix; the map is homogeneous of degree
    /// two in it.
    pub fn from_matrix(rho: &CMatrix, sign: Sign) -> Self {
        assert_eq!(rho.dim(), 4, "two-qubit operator expected");
        let r = |i: usize, j: usize| rho[(i - 1, j - 1)];
        let (r11, r22, r33, r44) = (r(1, 1).re, r(2, 2).re, r(3, 3).re, r(4, 4).re);
        let a_plus = (r11 * r44 + r22 * r33) / 2.0;
        let a_minus = (r11 * r44 - r22 * r33) / 2.0;
        let b_plus = (r(1, 4).norm_sqr() + r(2, 3).norm_sqr()) / 2.0;
        let b_minus = (r(1, 4).norm_sqr() - r(2, 3).norm_sqr()) / 2.0;
        let d12 = r(1, 2) * r(3, 4).conj();
        let d13 = r(1, 3) * r(2, 4).conj();
        let d_plus = d12 + d13;
        let d_minus = d12 - d13;

        let s = sign.value();
        Self {
            sign,
            a_plus,
            a_minus,
            b_plus,
            b_minus,
            d_plus,
            d_minus,
            rho11: a_plus + b_plus + s * d_plus.re,
            rho14: c(a_minus + b_minus, -s * d_plus.im),
            rho22: a_plus - b_plus - s * d_minus.re,
            rho23: c(a_minus - b_minus, s * d_minus.im),
            rho33: a_plus - b_plus + s * d_minus.re,
            rho44: a_plus + b_plus - s * d_plus.re,
        }
    }

    /// `Tr ρ′ = 4a₊`.
    pub fn success_probability(&self) -> f64 {
        4.0 * self.a_plus
    }

    pub fn to_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(4).expect("4x4");
        m[(0, 0)] = c(self.rho11, 0.0);
        m[(1, 1)] = c(self.rho22, 0.0);
        m[(2, 2)] = c(self.rho33, 0.0);
        m[(3, 3)] = c(self.rho44, 0.0);
        m[(0, 3)] = self.rho14;
        m[(3, 0)] = self.rho14.conj();
        m[(1, 2)] = self.rho23;
        m[(2, 1)] = self.rho23.conj();
        m
    }
}

/// Closed-form mixed map on an arbitrary (possibly unnormalized) operator.
pub fn map_density(rho: &CMatrix, sign: Sign) -> CMatrix {
    XStateElements::from_matrix(rho, sign).to_matrix()
}

pub fn step_mixed_closed(rho: &Density2Q, sign: Sign) -> Result<StepOutcome<Density2Q>> {
    rho.require_normalized()?;
    let x = XStateElements::from_matrix(rho.matrix(), sign);
    Ok(StepOutcome {
        state: Density2Q::from_matrix_unchecked(x.to_matrix()),
        success_probability: x.success_probability(),
        sign,
        representation: Representation::ClosedForm,
    })
}

/// Brute-force mixed step on `first⁽¹³⁾ ⊗ second⁽²⁴⁾`.
pub fn oracle_mixed_pair(first: &CMatrix, second: &CMatrix, sign: Sign) -> CMatrix {
    let (from, to) = pair_order();
    let joint = first.kron(second).and_then(|m| m.reorder(&from, &to)).expect("4 ⊗ 4 = 16");
    joint.conjugate_by(&local_unitary(sign)).project_ancillas_to_zero().expect("16-dimensional")
}

pub fn step_mixed_oracle(rho: &Density2Q, sign: Sign) -> Result<StepOutcome<Density2Q>> {
    rho.require_normalized()?;
    let m = oracle_mixed_pair(rho.matrix(), rho.matrix(), sign);
    Ok(StepOutcome {
        success_probability: m.trace().re,
        state: Density2Q::from_matrix_unchecked(m),
        sign,
        representation: Representation::Oracle,
    })
}
