//! Iterated schemes built from the core step.
//!
//! Two steps on four copies of a pure state either fail or output `|Φ+⟩`
//! exactly. Three steps on eight copies of a slightly mixed state output
//! `|Φ+⟩` up to second order in the noise weight.
//!
//! All copies at one level of the binary tree are identical, so the
//! iteration tracks a single state per level. The probability that the whole
//! tree succeeds is `P₁^(2^(k−1)) · P₂^(2^(k−2)) ⋯ P_k`; a failure anywhere
//! discards all `2^k` input pairs.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gates::Sign;
use crate::linalg::{c, CMatrix, C64, HERMITIAN_TOL};
use crate::states::{fidelity_with_pure, overlap, random_local_unitary, BellState, Density2Q, LocalPair, PureState2Q};
use crate::step::{map_amplitudes, step_mixed_closed, step_pure_closed, StepOutcome};

/// Overlap above which a step-1 output counts as the blind-spot basis state.
pub const SIGNATURE_TOL: f64 = 1e-10;
/// Tolerance on `Tr M = 0`.
pub const TRACELESS_TOL: f64 = 1e-12;

/// Per-level record of an iterated run.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace<S> {
    /// One outcome per executed level; level `k` acts on the normalized
    /// output of level `k − 1`.
    pub steps: Vec<StepOutcome<S>>,
    pub cumulative_success_probability: f64,
    /// `2^depth`
    pub pairs_consumed: usize,
    /// 1-based level whose post-selection never succeeds.
    pub failed_at_step: Option<usize>,
}

impl<S> IterationTrace<S> {
    pub fn succeeded(&self) -> bool {
        self.failed_at_step.is_none()
    }

    pub fn depth(&self) -> usize {
        self.pairs_consumed.trailing_zeros() as usize
    }

    pub fn step_probabilities(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.success_probability).collect()
    }
}

impl IterationTrace<PureState2Q> {
    /// Normalized output of the last level, if the run succeeded.
    pub fn output(&self) -> Option<PureState2Q> {
        if !self.succeeded() {
            return None;
        }
        self.steps.last().and_then(|s| s.normalized_state().ok())
    }

    pub fn final_fidelity(&self, target: &PureState2Q) -> Option<f64> {
        self.output().map(|s| overlap(&s, target))
    }
}

impl IterationTrace<Density2Q> {
    pub fn output(&self) -> Option<Density2Q> {
        if !self.succeeded() {
            return None;
        }
        self.steps.last().and_then(|s| s.normalized_state().ok())
    }

    pub fn final_fidelity(&self, target: &PureState2Q) -> Option<f64> {
        self.output().and_then(|rho| fidelity_with_pure(&rho, target).ok())
    }
}

/// Success probability of a depth-`k` tree given per-level probabilities.
///
/// Level `j` (1-based) runs `2^(k−j)` times. Levels missing from
/// `step_probabilities` (never reached) contribute a factor 1.
pub fn tree_success_probability(step_probabilities: &[f64], depth: usize) -> f64 {
    step_probabilities
        .iter()
        .enumerate()
        .map(|(j, &p)| (0..1u32 << (depth - 1 - j)).fold(1.0, |acc, _| acc * p))
        .product()
}

fn iterate<S, F, N>(input: S, depth: usize, mut step: F, normalize: N) -> Result<IterationTrace<S>>
where
    F: FnMut(&S) -> Result<StepOutcome<S>>,
    N: Fn(&StepOutcome<S>) -> Result<S>,
{
    let mut steps = Vec::with_capacity(depth);
    let mut failed_at_step = None;
    let mut current = input;
    for level in 1..=depth {
        let out = step(&current)?;
        let failed = out.is_failure();
        if !failed && level < depth {
            current = normalize(&out)?;
        }
        steps.push(out);
        if failed {
            failed_at_step = Some(level);
            break;
        }
    }
    let probs: Vec<f64> = steps.iter().map(|s| s.success_probability).collect();
    let mut cumulative = tree_success_probability(&probs, depth);
    if failed_at_step.is_some() {
        // the failed level has probability below the threshold; report it as 0
        cumulative = 0.0;
    }
    Ok(IterationTrace { steps, cumulative_success_probability: cumulative, pairs_consumed: 1 << depth, failed_at_step })
}

/// Two-step concentration on four copies of a pure state.
///
/// On success the output is `|Φ+⟩` for either sign.
pub fn concentrate(s: &PureState2Q, sign: Sign) -> Result<IterationTrace<PureState2Q>> {
    s.require_normalized()?;
    iterate(*s, 2, |x| step_pure_closed(x, sign), |o| o.normalized_state())
}

/// Iterated mixed-state step on `2^steps` copies of `rho`, `steps ∈ {2, 3}`.
pub fn distill(rho: &Density2Q, sign: Sign, steps: usize) -> Result<IterationTrace<Density2Q>> {
    if !(2..=3).contains(&steps) {
        return Err(Error::InvalidSteps(steps));
    }
    rho.require_normalized()?;
    iterate(rho.clone(), steps, |x| step_mixed_closed(x, sign), |o| o.normalized_state())
}

/// Expected number of input pairs per successful output when every failed
/// attempt discards the whole batch.
pub fn expected_cost<S>(trace: &IterationTrace<S>) -> f64 {
    let p = trace.cumulative_success_probability;
    if !trace.succeeded() || p <= 0.0 {
        return f64::INFINITY;
    }
    trace.pairs_consumed as f64 / p
}

/// The basis state a blind-spot input lands in after one successful step:
/// `|11⟩` for `U+`, `|00⟩` for `U−`.
pub fn blind_spot_image(sign: Sign) -> PureState2Q {
    let amps = match sign {
        Sign::Plus => [0.0, 0.0, 0.0, 1.0],
        Sign::Minus => [1.0, 0.0, 0.0, 0.0],
    };
    PureState2Q::from_real(amps).expect("finite")
}

/// Step 2 failed after step 1 produced the blind-spot image.
pub fn has_blind_spot_signature(trace: &IterationTrace<PureState2Q>) -> bool {
    if trace.failed_at_step != Some(2) {
        return false;
    }
    let first = &trace.steps[0];
    overlap(&first.state, &blind_spot_image(first.sign)) >= 1.0 - SIGNATURE_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScrambleStatus {
    Concentrated,
    /// Failed without the blind-spot signature: the input is separable and
    /// local unitaries cannot help.
    NotBlindSpot,
    /// Every scrambled attempt still hit the blind spot.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScrambleResult {
    pub trace: IterationTrace<PureState2Q>,
    pub attempts: usize,
    pub status: ScrambleStatus,
    /// The (possibly scrambled) state fed to the last attempt.
    pub input: PureState2Q,
}

/// Runs [`concentrate`]; on a blind-spot failure, applies fresh random local
/// unitaries `uA ⊗ uB` to the original input and tries again, up to
/// `max_attempts` runs in total.
pub fn scramble_and_retry<R: Rng + ?Sized>(
    s: &PureState2Q,
    sign: Sign,
    rng: &mut R,
    max_attempts: usize,
) -> Result<ScrambleResult> {
    let mut input = *s;
    let mut trace = concentrate(&input, sign)?;
    let mut attempts = 1;
    if trace.succeeded() {
        return Ok(ScrambleResult { trace, attempts, status: ScrambleStatus::Concentrated, input });
    }
    if !has_blind_spot_signature(&trace) {
        return Ok(ScrambleResult { trace, attempts, status: ScrambleStatus::NotBlindSpot, input });
    }
    while attempts < max_attempts {
        let ua = random_local_unitary(rng);
        let ub = random_local_unitary(rng);
        input = s.apply_local_pair(&ua, &ub)?.normalize()?;
        trace = concentrate(&input, sign)?;
        attempts += 1;
        if trace.succeeded() {
            return Ok(ScrambleResult { trace, attempts, status: ScrambleStatus::Concentrated, input });
        }
    }
    Ok(ScrambleResult { trace, attempts, status: ScrambleStatus::Exhausted, input })
}

/// Intermediate quantities of the first-order map.
///
/// ```text
/// α± = (|c₁|²m₄₄ ± |c₂|²m₃₃ ± |c₃|²m₂₂ + |c₄|²m₁₁)/2
/// β± = c₁c₄*m₁₄* ± c₂c₃*m₂₃*
/// γ± = c₁c₂*m₃₄* + c₃*c₄m₁₂ ± c₁c₃*m₂₄* ± c₂*c₄m₁₃
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderTerms {
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub beta_plus: C64,
    pub beta_minus: C64,
    pub gamma_plus: C64,
    pub gamma_minus: C64,
}

impl FirstOrderTerms {
    pub fn new(amps: &[C64; 4], m: &CMatrix) -> Self {
        let [c1, c2, c3, c4] = *amps;
        let e = |i: usize, j: usize| m[(i - 1, j - 1)];
        let (n1, n2, n3, n4) = (c1.norm_sqr(), c2.norm_sqr(), c3.norm_sqr(), c4.norm_sqr());
        let (m11, m22, m33, m44) = (e(1, 1).re, e(2, 2).re, e(3, 3).re, e(4, 4).re);
        let outer = n1 * m44 + n4 * m11;
        let inner = n2 * m33 + n3 * m22;
        let b14 = c1 * c4.conj() * e(1, 4).conj();
        let b23 = c2 * c3.conj() * e(2, 3).conj();
        let g_common = c1 * c2.conj() * e(3, 4).conj() + c3.conj() * c4 * e(1, 2);
        let g_signed = c1 * c3.conj() * e(2, 4).conj() + c2.conj() * c4 * e(1, 3);
        Self {
            alpha_plus: (outer + inner) / 2.0,
            alpha_minus: (outer - inner) / 2.0,
            beta_plus: b14 + b23,
            beta_minus: b14 - b23,
            gamma_plus: g_common + g_signed,
            gamma_minus: g_common - g_signed,
        }
    }

    /// The X-shaped first-order operator for `U+`.
    pub fn operator(&self) -> CMatrix {
        let (ap, am) = (self.alpha_plus, self.alpha_minus);
        let (bp, bm) = (self.beta_plus.re, self.beta_minus.re);
        let (gp, gm) = (self.gamma_plus, self.gamma_minus);
        let m14 = c(am + bm, -gp.im);
        let m23 = c(am - bm, gm.im);
        let mut m = CMatrix::zeros(4).expect("4x4");
        m[(0, 0)] = c(ap + bp + gp.re, 0.0);
        m[(1, 1)] = c(ap - bp - gm.re, 0.0);
        m[(2, 2)] = c(ap - bp + gm.re, 0.0);
        m[(3, 3)] = c(ap + bp - gp.re, 0.0);
        m[(0, 3)] = m14;
        m[(3, 0)] = m14.conj();
        m[(1, 2)] = m23;
        m[(2, 1)] = m23.conj();
        m
    }
}

/// First-order term of the `U+` step applied to `|ψ⟩⟨ψ| + εM`:
/// the coefficient of `ε` in the output.
pub fn first_order_operator(psi: &PureState2Q, m: &CMatrix) -> CMatrix {
    FirstOrderTerms::new(&psi.amplitudes(), m).operator()
}

/// First-order noise operators through three `U+` steps for
/// `ρ = |ψ⟩⟨ψ| + εM`.
///
/// After each step `ρ⁽ᵏ⁾ = |ψ⁽ᵏ⁾⟩⟨ψ⁽ᵏ⁾| + εM⁽ᵏ⁾ + O(ε²)`, unnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSeries {
    pub psi: PureState2Q,
    pub m: CMatrix,
    pub terms: FirstOrderTerms,
    /// `M′`
    pub m1: CMatrix,
    /// `α′₊ = (|c₁′|²m′₄₄ + |c₄′|²m′₁₁)/2`
    pub alpha2_plus: f64,
    /// `β′₊ = c₁′c₄′* m′₁₄*`
    pub beta2_plus: C64,
    /// `M″`: `m″₁₁ = m″₁₄ = m″₄₄ = α′₊ + Re β′₊`,
    /// `m″₂₂ = m″₂₃ = m″₃₃ = α′₊ − Re β′₊`.
    pub m2: CMatrix,
    /// `M‴`: only `m‴₁₁ = m‴₁₄ = m‴₄₄ = 2|c₁′|²|c₄′|²·m″₁₁` survive, so
    /// `M‴ ∝ |Φ+⟩⟨Φ+|`.
    pub m3: CMatrix,
}

impl PerturbationSeries {
    /// Pure part after `level` steps (0 = input), unnormalized.
    pub fn pure_part(&self, level: usize) -> PureState2Q {
        (0..level).fold(self.psi, |s, _| map_amplitudes(&s, Sign::Plus))
    }

    /// `M⁽ᵏ⁾` for `level ∈ 0..=3` (`M⁽⁰⁾ = M`).
    pub fn first_order(&self, level: usize) -> &CMatrix {
        match level {
            0 => &self.m,
            1 => &self.m1,
            2 => &self.m2,
            3 => &self.m3,
            _ => panic!("perturbation series has levels 0..=3, got {level}"),
        }
    }

    /// `|ψ⁽ᵏ⁾⟩⟨ψ⁽ᵏ⁾| + εM⁽ᵏ⁾`.
    pub fn first_order_prediction(&self, level: usize, epsilon: f64) -> CMatrix {
        &self.pure_part(level).projector() + &self.first_order(level).scale_real(epsilon)
    }
}

fn x_block(outer: f64, inner: f64) -> CMatrix {
    let mut m = CMatrix::zeros(4).expect("4x4");
    for (r, col) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(r, col)] = c(outer, 0.0);
    }
    for (r, col) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        m[(r, col)] = c(inner, 0.0);
    }
    m
}

/// Builds `M′`, `M″`, `M‴` for `U+`. `M` must be traceless and Hermitian.
pub fn perturbation_series(psi: &PureState2Q, m: &CMatrix, sign: Sign) -> Result<PerturbationSeries> {
    if sign != Sign::Plus {
        return Err(Error::UnsupportedSign);
    }
    psi.require_normalized()?;
    if m.dim() != 4 {
        return Err(Error::DimensionMismatch { left: m.dim(), right: 4 });
    }
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let tr = m.trace();
    if tr.norm() > TRACELESS_TOL {
        return Err(Error::NotTraceless(tr.norm()));
    }

    let terms = FirstOrderTerms::new(&psi.amplitudes(), m);
    let m1 = terms.operator();

    let psi1 = map_amplitudes(psi, Sign::Plus);
    let (c1, c4) = (psi1.c1(), psi1.c4());
    let alpha2_plus = (c1.norm_sqr() * m1[(3, 3)].re + c4.norm_sqr() * m1[(0, 0)].re) / 2.0;
    let beta2_plus = c1 * c4.conj() * m1[(0, 3)].conj();
    let m2_outer = alpha2_plus + beta2_plus.re;
    let m2 = x_block(m2_outer, alpha2_plus - beta2_plus.re);

    let m3 = x_block(2.0 * c1.norm_sqr() * c4.norm_sqr() * m2_outer, 0.0);

    Ok(PerturbationSeries { psi: *psi, m: m.clone(), terms, m1, alpha2_plus, beta2_plus, m2, m3 })
}

/// `|Φ+⟩`, the only state a successful run can output.
pub fn target() -> PureState2Q {
    BellState::PhiPlus.state()
}
