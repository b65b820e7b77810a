//! The protocol unitaries `U±` and their decomposition into elementary gates.
//!
//! Conventions: `H = [[1, 1], [1, −1]]/√2`, and the CNOT control is the first
//! (left) tensor factor.

use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;

use crate::linalg::CMatrix;

/// Selects `U+` or `U−`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateLabel {
    UPlus,
    UMinus,
    Cnot,
    Composite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitGate {
    pub m: CMatrix,
    pub label: GateLabel,
}

pub fn hadamard() -> CMatrix {
    CMatrix::from_real_rows(FRAC_1_SQRT_2, [[1.0, 1.0], [1.0, -1.0]]).expect("2x2")
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_real_rows(1.0, [[0.0, 1.0], [1.0, 0.0]]).expect("2x2")
}

pub fn identity2() -> CMatrix {
    CMatrix::identity(2).expect("2x2")
}

pub fn cnot() -> TwoQubitGate {
    let m = CMatrix::from_real_rows(
        1.0,
        [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 0.0]],
    )
    .expect("4x4");
    TwoQubitGate { m, label: GateLabel::Cnot }
}

/// `U±` written out entry by entry.
pub fn u_pm(sign: Sign) -> TwoQubitGate {
    let s = sign.value();
    let m = CMatrix::from_real_rows(
        FRAC_1_SQRT_2,
        [[0.0, 1.0, s, 0.0], [1.0, 0.0, 0.0, s], [0.0, 1.0, -s, 0.0], [1.0, 0.0, 0.0, -s]],
    )
    .expect("4x4");
    let label = match sign {
        Sign::Plus => GateLabel::UPlus,
        Sign::Minus => GateLabel::UMinus,
    };
    TwoQubitGate { m, label }
}

/// `U+ = (H⊗1)·CNOT·(1⊗X)` and `U− = (X⊗1)·U+`, multiplied out.
pub fn u_pm_from_decomposition(sign: Sign) -> TwoQubitGate {
    let h1 = hadamard().kron(&identity2()).expect("4x4");
    let x2 = identity2().kron(&pauli_x()).expect("4x4");
    let mut m = &(&h1 * &cnot().m) * &x2;
    if sign == Sign::Minus {
        let x1 = pauli_x().kron(&identity2()).expect("4x4");
        m = &x1 * &m;
    }
    TwoQubitGate { m, label: GateLabel::Composite }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_plus_rows() {
        let u = u_pm(Sign::Plus).m;
        let r = FRAC_1_SQRT_2;
        let row0: [f64; 4] = core::array::from_fn(|k| u[(0, k)].re);
        assert_eq!(row0, [0.0, r, r, 0.0]);
        assert!(u.as_slice().iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn u_minus_third_row_flips() {
        let u = u_pm(Sign::Minus).m;
        let r = FRAC_1_SQRT_2;
        let row2: [f64; 4] = core::array::from_fn(|k| u[(2, k)].re);
        assert_eq!(row2, [0.0, r, r, 0.0]);
    }

    #[test]
    fn gates_are_unitary() {
        for g in [u_pm(Sign::Plus).m, u_pm(Sign::Minus).m, cnot().m] {
            assert!(g.is_unitary(1e-12));
        }
        assert!(hadamard().is_unitary(1e-12));
        assert!(pauli_x().is_unitary(1e-12));
        let big = u_pm(Sign::Plus).m.kron(&u_pm(Sign::Plus).m).unwrap();
        assert!(big.is_unitary(1e-12));
    }

    #[test]
    fn decomposition_matches_entrywise() {
        for s in [Sign::Plus, Sign::Minus] {
            let d = u_pm(s).m.max_abs_diff(&u_pm_from_decomposition(s).m);
            assert!(d <= 1e-12, "sign {s}: {d:e}");
        }
    }

    #[test]
    fn u_minus_is_x_on_first_qubit_times_u_plus() {
        let x1 = pauli_x().kron(&identity2()).unwrap();
        let lhs = &x1 * &u_pm(Sign::Plus).m;
        assert!(lhs.max_abs_diff(&u_pm(Sign::Minus).m) <= 1e-12);
    }
}
