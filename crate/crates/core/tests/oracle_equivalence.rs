mod common;

use bellforge_core::gates::Sign;
use bellforge_core::linalg::{is_hermitian, is_psd};
use bellforge_core::states::{
    concurrence_pure, noise_operator, random_density, random_pure, Density2Q, NoiseKind, NoiseModel, PureState2Q,
};
use bellforge_core::step::{
    oracle_pure_pair, step_mixed_closed, step_mixed_oracle, step_pure_closed, step_pure_oracle,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIGNS: [Sign; 2] = [Sign::Plus, Sign::Minus];

#[test]
fn pure_closed_form_matches_oracle_on_haar_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let s = random_pure(&mut rng);
        for sign in SIGNS {
            let closed = step_pure_closed(&s, sign).unwrap();
            let oracle = step_pure_oracle(&s, sign).unwrap();
            worst = worst
                .max(closed.state.max_abs_diff(&oracle.state))
                .max((closed.success_probability - oracle.success_probability).abs());
        }
    }
    assert!(worst <= 1e-12, "max discrepancy {worst:e}");
}

#[test]
fn mixed_closed_form_matches_oracle_on_ginibre_densities() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let base = random_pure(&mut rng);
        let eps = rng.random::<f64>() * 0.999;
        let rho = random_density(&NoiseModel::new(NoiseKind::Ginibre, eps).unwrap(), &base, &mut rng).unwrap();
        for sign in SIGNS {
            let closed = step_mixed_closed(&rho, sign).unwrap();
            let oracle = step_mixed_oracle(&rho, sign).unwrap();
            worst = worst
                .max(closed.state.matrix().max_abs_diff(oracle.state.matrix()))
                .max((closed.success_probability - oracle.success_probability).abs());
        }
    }
    assert!(worst <= 1e-12, "max discrepancy {worst:e}");
}

#[test]
fn oracle_output_has_x_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let x_positions = [(0, 0), (0, 3), (1, 1), (1, 2), (2, 1), (2, 2), (3, 0), (3, 3)];
    for _ in 0..200 {
        let rho =
            Density2Q::new(noise_operator(NoiseKind::Ginibre, &random_pure(&mut rng), &mut rng).into_matrix()).unwrap();
        for sign in SIGNS {
            let closed = step_mixed_closed(&rho, sign).unwrap();
            let oracle = step_mixed_oracle(&rho, sign).unwrap();
            for r in 0..4 {
                for c in 0..4 {
                    if x_positions.contains(&(r, c)) {
                        continue;
                    }
                    assert_eq!(closed.state.matrix()[(r, c)].norm(), 0.0);
                    assert!(oracle.state.matrix()[(r, c)].norm() <= 1e-12);
                }
            }
            assert!(is_hermitian(closed.state.matrix(), 1e-12));
            assert!(is_psd(closed.state.matrix(), 1e-9));
            let t = closed.state.trace();
            assert!((t - closed.success_probability).abs() <= 1e-15);
            assert!((0.0..=1.0).contains(&closed.success_probability));
        }
    }
}

#[test]
fn pure_and_mixed_maps_agree_on_projectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..500 {
        let s = random_pure(&mut rng);
        for sign in SIGNS {
            let pure = step_pure_closed(&s, sign).unwrap();
            let mixed = step_mixed_closed(&Density2Q::from_pure(&s), sign).unwrap();
            assert!(mixed.state.matrix().max_abs_diff(&pure.state.projector()) <= 1e-12);
            assert!((mixed.success_probability - pure.success_probability).abs() <= 1e-12);
            let oracle = step_mixed_oracle(&Density2Q::from_pure(&s), sign).unwrap();
            assert!(oracle.state.matrix().max_abs_diff(&pure.state.projector()) <= 1e-12);
        }
    }
}

#[test]
fn separable_inputs_succeed_with_four_c1c4_squared() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for _ in 0..1000 {
        let s = common::random_product(&mut rng);
        let expected = 4.0 * (s.c1() * s.c4()).norm_sqr();
        for sign in SIGNS {
            let p = step_pure_closed(&s, sign).unwrap().success_probability;
            assert!((p - expected).abs() <= 1e-12, "{p} vs {expected}");
        }
    }
}

#[test]
fn schmidt_inputs_succeed_with_half_concurrence_squared() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for _ in 0..1000 {
        let s = common::random_schmidt(&mut rng);
        let conc = concurrence_pure(&s).unwrap();
        for sign in SIGNS {
            let p = step_pure_closed(&s, sign).unwrap().success_probability;
            assert!((p - conc * conc / 2.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn oracle_accepts_distinct_pairs() {
    // |00⟩ on (1,3) and |11⟩ on (2,4): each party holds |01⟩, and
    // U+|01⟩ = (|00⟩ + |10⟩)/√2 leaves the ancilla in |0⟩ for both terms, so
    // the kept pair is |+⟩|+⟩ with amplitude 1/2 on every basis state.
    let a = PureState2Q::from_real([1.0, 0.0, 0.0, 0.0]).unwrap();
    let b = PureState2Q::from_real([0.0, 0.0, 0.0, 1.0]).unwrap();
    let out = oracle_pure_pair(&a, &b, Sign::Plus);
    let want = PureState2Q::from_real([0.5; 4]).unwrap();
    assert!(out.max_abs_diff(&want) <= 1e-15, "{out}");
}
