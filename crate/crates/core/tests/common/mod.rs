#![allow(dead_code)]

use bellforge_core::linalg::CMatrix;
use bellforge_core::states::{noise_operator, random_pure, NoiseKind, PureState2Q};
use rand::Rng;

/// Offsets −4..=4 of the 9-point central stencil for `f′(0)`. Exact for
/// polynomials of degree ≤ 8, which covers three iterations of a degree-2 map.
const STENCIL: [f64; 9] =
    [1.0 / 280.0, -4.0 / 105.0, 1.0 / 5.0, -4.0 / 5.0, 0.0, 4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

pub fn derivative_at_zero(h: f64, f: impl Fn(f64) -> CMatrix) -> CMatrix {
    let mut acc = CMatrix::zeros(4).unwrap();
    for (k, w) in STENCIL.iter().enumerate() {
        if *w == 0.0 {
            continue;
        }
        let x = (k as f64 - 4.0) * h;
        acc = &acc + &f(x).scale_real(*w / h);
    }
    acc
}

/// `M = ρ_err − |ψ⟩⟨ψ|` for Ginibre noise.
pub fn random_traceless_noise<R: Rng>(psi: &PureState2Q, rng: &mut R) -> CMatrix {
    let err = noise_operator(NoiseKind::Ginibre, psi, rng);
    err.matrix() - &psi.projector()
}

/// Product state `(a0|0⟩ + a1|1⟩) ⊗ (b0|0⟩ + b1|1⟩)` with Haar-random factors.
pub fn random_product<R: Rng>(rng: &mut R) -> PureState2Q {
    let a = random_pure(rng).amplitudes();
    let b = random_pure(rng).amplitudes();
    let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
    let nb = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
    let (a0, a1, b0, b1) = (a[0] / na, a[1] / na, b[0] / nb, b[1] / nb);
    PureState2Q::new([a0 * b0, a0 * b1, a1 * b0, a1 * b1]).unwrap().normalize().unwrap()
}

/// Schmidt-form state `c₁|00⟩ + c₄|11⟩`.
pub fn random_schmidt<R: Rng>(rng: &mut R) -> PureState2Q {
    let a = random_pure(rng).amplitudes();
    let zero = a[1] * 0.0;
    PureState2Q::new([a[0], zero, zero, a[3]]).unwrap().normalize().unwrap()
}
