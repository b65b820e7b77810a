//! Cyclic Jacobi eigensolver for small Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq`, then applies
//! the classical real rotation that annihilates it. For the 4 × 4 and
//! 16 × 16 matrices used here a handful of sweeps reach machine precision.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, SqrtExt, ZERO};

pub const MAX_SWEEPS: usize = 100;
/// Convergence threshold on the off-diagonal Frobenius norm, relative to
/// `max(1, ‖M‖_F)`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Eigen-decomposition `M = V · diag(values) · V†`.
///
/// Eigenvalues are sorted ascending; column `k` of `vectors` belongs to
/// `values[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
    pub sweeps: usize,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> CMatrix {
        let d: Vec<_> = self.values.iter().map(|&x| c(x, 0.0)).collect();
        let d = CMatrix::diagonal_matrix(&d).expect("dimension already validated");
        &(&self.vectors * &d) * &self.vectors.dagger()
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                s += a[(p, q)].norm_sqr();
            }
        }
    }
    s.sqrt_libm()
}

/// Diagonalizes a Hermitian matrix. Only the upper triangle's conjugate
/// symmetry is assumed, so callers should pass `hermitian_part()` for noisy
/// input.
pub fn hermitian_eigen(m: &CMatrix) -> Result<HermitianEigen> {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = CMatrix::identity(n)?;
    let threshold = OFF_DIAGONAL_TOL * m.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_diagonal: off });
        }
        sweeps += 1;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n)?;
    for (k, &i) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, k)] = v[(r, i)];
        }
    }
    Ok(HermitianEigen { values, vectors, sweeps })
}

/// One Jacobi rotation on the `(p, q)` plane: `a ← J† a J`, `v ← v J`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt_libm());
    let t = if theta == 0.0 { 1.0 } else { t };
    let cs = 1.0 / (t * t + 1.0).sqrt_libm();
    let sn = t * cs;

    // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane.
    let jpp = c(cs, 0.0);
    let jpq = c(sn, 0.0);
    let jqp = -phase.conj() * sn;
    let jqq = phase.conj() * cs;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = c(a[(p, p)].re, 0.0);
    a[(q, q)] = c(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let w = CMatrix::from_fn(n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        (&w + &w.dagger()).scale_real(0.5)
    }

    #[test]
    fn diagonal_input_is_exact() {
        let d = [c(3.0, 0.0), c(-1.5, 0.0), c(0.25, 0.0), c(0.0, 0.0)];
        let eig = hermitian_eigen(&CMatrix::diagonal_matrix(&d).unwrap()).unwrap();
        let expected = [-1.5, 0.0, 0.25, 3.0];
        for (got, want) in eig.values.iter().zip(expected) {
            assert!((got - want).abs() <= 1e-12);
        }
        assert_eq!(eig.sweeps, 0);
    }

    #[test]
    fn reconstructs_random_hermitian_4_and_16() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in [4, 16] {
            for _ in 0..20 {
                let m = random_hermitian(&mut rng, n);
                let eig = hermitian_eigen(&m).unwrap();
                assert!(eig.reconstruct().max_abs_diff(&m) <= 1e-10);
                assert!(eig.vectors.is_unitary(1e-10));
                assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn trace_equals_eigenvalue_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let m = random_hermitian(&mut rng, 4);
        let eig = hermitian_eigen(&m).unwrap();
        let sum: f64 = eig.values.iter().sum();
        assert!((sum - m.trace().re).abs() <= 1e-12);
    }

    #[test]
    fn degenerate_spectrum() {
        // Projector onto a Bell state: eigenvalues {0, 0, 0, 1}.
        let h = 0.5;
        let m = CMatrix::from_real_rows(
            h,
            [[1.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 1.0]],
        )
        .unwrap();
        let eig = hermitian_eigen(&m).unwrap();
        assert!((eig.values[3] - 1.0).abs() <= 1e-12);
        assert!(eig.values[..3].iter().all(|x| x.abs() <= 1e-12));
    }
}
