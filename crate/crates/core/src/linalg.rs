//! Dense complex vectors and matrices for 1 to 4 qubits.
//!
//! Basis indices follow a fixed bit convention: for qubits ordered
//! `(q₁, q₂, …, qₙ)` the index is the binary number `b₁b₂…bₙ`, so the first
//! qubit is the most significant bit.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::jacobi;

pub type C64 = Complex<f64>;

pub const MAX_DIM: usize = 16;

/// Default tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Default tolerance for positive semidefiniteness.
pub const PSD_TOL: f64 = 1e-9;

pub(crate) const ZERO: C64 = Complex::new(0.0, 0.0);
pub(crate) const ONE: C64 = Complex::new(1.0, 0.0);

pub(crate) fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM || !dim.is_power_of_two() {
        return Err(Error::InvalidDimension(dim));
    }
    Ok(())
}

fn all_finite(data: &[C64]) -> bool {
    data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Number of qubits spanned by a space of dimension `dim`.
pub fn qubit_count(dim: usize) -> usize {
    dim.trailing_zeros() as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    data: Vec<C64>,
}

impl CVector {
    pub fn new(data: Vec<C64>) -> Result<Self> {
        check_dim(data.len())?;
        if !all_finite(&data) {
            return Err(Error::NonFinite);
        }
        Ok(Self { data })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { data: vec![ZERO; dim] })
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        let mut v = Self::zeros(dim)?;
        if index >= dim {
            return Err(Error::LengthMismatch { expected: dim, found: index + 1 });
        }
        v.data[index] = ONE;
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &CVector) -> C64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> CMatrix {
        let n = self.dim();
        CMatrix::from_fn(n, |r, col| self.data[r] * self.data[col].conj())
    }

    pub fn scale(&self, k: C64) -> CVector {
        CVector { data: self.data.iter().map(|z| z * k).collect() }
    }

    pub fn kron(&self, other: &CVector) -> Result<CVector> {
        let dim = self.dim() * other.dim();
        if dim > MAX_DIM {
            return Err(Error::DimensionOverflow(dim));
        }
        let data = self.data.iter().flat_map(|a| other.data.iter().map(move |b| a * b)).collect();
        Ok(CVector { data })
    }

    pub fn max_abs_diff(&self, other: &CVector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).fold(0.0, f64::max).sqrt_libm()
    }
}

impl Index<usize> for CVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.data[i]
    }
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::LengthMismatch { expected: dim * dim, found: data.len() });
        }
        if !all_finite(&data) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Result<Self> {
        Self::new(N, rows.iter().flatten().copied().collect())
    }

    /// Real-valued rows, scaled by `k`.
    pub fn from_real_rows<const N: usize>(k: f64, rows: [[f64; N]; N]) -> Result<Self> {
        Self::new(N, rows.iter().flatten().map(|&x| c(k * x, 0.0)).collect())
    }

    pub(crate) fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        debug_assert!(check_dim(dim).is_ok());
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for col in 0..dim {
                data.push(f(r, col));
            }
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, data: vec![ZERO; dim * dim] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::from_fn(dim, |r, col| if r == col { ONE } else { ZERO }))
    }

    pub fn diagonal_matrix(diag: &[C64]) -> Result<Self> {
        check_dim(diag.len())?;
        Ok(Self::from_fn(diag.len(), |r, col| if r == col { diag[r] } else { ZERO }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn dagger(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, |r, col| self[(col, r)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, k: C64) -> CMatrix {
        CMatrix { dim: self.dim, data: self.data.iter().map(|z| z * k).collect() }
    }

    pub fn scale_real(&self, k: f64) -> CMatrix {
        self.scale(c(k, 0.0))
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        assert_eq!(self.dim, v.dim(), "matrix-vector dimension mismatch");
        let data = (0..self.dim).map(|r| self.row(r).iter().zip(v.as_slice()).map(|(a, b)| a * b).sum()).collect();
        CVector { data }
    }

    /// `u · self · u†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> CMatrix {
        &(u * self) * &u.dagger()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max).sqrt_libm()
    }

    /// Largest entry modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).fold(0.0, f64::max).sqrt_libm()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt_libm()
    }

    pub fn kron(&self, other: &CMatrix) -> Result<CMatrix> {
        let dim = self.dim * other.dim;
        if dim > MAX_DIM {
            return Err(Error::DimensionOverflow(dim));
        }
        let nb = other.dim;
        Ok(CMatrix::from_fn(dim, |r, col| self[(r / nb, col / nb)] * other[(r % nb, col % nb)]))
    }

    /// `max |m − m†|` over all entries.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for col in r..self.dim {
                worst = worst.max((self[(r, col)] - self[(col, r)].conj()).norm_sqr());
            }
        }
        worst.sqrt_libm()
    }

    /// `max |U†U − I|` over all entries.
    pub fn unitary_deviation(&self) -> f64 {
        let id = CMatrix::from_fn(self.dim, |r, col| if r == col { ONE } else { ZERO });
        (&self.dagger() * self).max_abs_diff(&id)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_deviation() <= tol
    }

    /// `(m + m†)/2`.
    pub fn hermitian_part(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, |r, col| (self[(r, col)] + self[(col, r)].conj()) * 0.5)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (r, col): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + col]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + col]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        CMatrix::from_fn(n, |r, col| (0..n).map(|k| self[(r, k)] * rhs[(k, col)]).sum())
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// `max |m − m†| ≤ tol`.
pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.hermitian_deviation() <= tol
}

/// All eigenvalues of the Hermitian part of `m` are `≥ −tol`.
pub fn is_psd(m: &CMatrix, tol: f64) -> bool {
    match min_eigenvalue(m) {
        Ok(lambda) => lambda >= -tol,
        Err(_) => false,
    }
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue(m: &CMatrix) -> Result<f64> {
    let eig = jacobi::hermitian_eigen(&m.hermitian_part())?;
    Ok(eig.values.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Labels of qubits in bit order, most significant first.
///
/// `(1, 3, 2, 4)` describes a four-qubit index `b₁b₃b₂b₄`, which is how
/// `ρ⁽¹³⁾ ⊗ ρ⁽²⁴⁾` comes out of a plain Kronecker product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitOrder(Vec<u8>);

impl QubitOrder {
    pub fn new(labels: &[u8]) -> Result<Self> {
        if labels.is_empty() || labels.len() > qubit_count(MAX_DIM) {
            return Err(Error::QubitOrderMismatch);
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[i + 1..].contains(a) {
                return Err(Error::QubitOrderMismatch);
            }
        }
        Ok(Self(labels.to_vec()))
    }

    /// `(1, 2, …, n)`.
    pub fn natural(n: usize) -> Result<Self> {
        let labels: Vec<u8> = (1..=n as u8).collect();
        Self::new(&labels)
    }

    pub fn labels(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// For each index in `self` order, the matching index in `to` order.
    fn index_map(&self, to: &QubitOrder) -> Result<Vec<usize>> {
        let n = self.len();
        if to.len() != n || !self.0.iter().all(|l| to.0.contains(l)) {
            return Err(Error::QubitOrderMismatch);
        }
        // position in `to` of the label at each position in `self`
        let target_pos: Vec<usize> = self.0.iter().map(|l| to.0.iter().position(|m| m == l).unwrap_or(0)).collect();
        Ok((0..1usize << n)
            .map(|i| {
                let mut j = 0;
                for (k, &pos) in target_pos.iter().enumerate() {
                    let bit = (i >> (n - 1 - k)) & 1;
                    j |= bit << (n - 1 - pos);
                }
                j
            })
            .collect())
    }
}

/// Relabelling of basis indices between two qubit orders.
pub trait Reorder: Sized {
    fn reorder(&self, from: &QubitOrder, to: &QubitOrder) -> Result<Self>;
}

impl Reorder for CVector {
    fn reorder(&self, from: &QubitOrder, to: &QubitOrder) -> Result<Self> {
        if self.dim() != 1 << from.len() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: 1 << from.len() });
        }
        let map = from.index_map(to)?;
        let mut data = vec![ZERO; self.dim()];
        for (i, &j) in map.iter().enumerate() {
            data[j] = self.data[i];
        }
        Ok(CVector { data })
    }
}

impl Reorder for CMatrix {
    fn reorder(&self, from: &QubitOrder, to: &QubitOrder) -> Result<Self> {
        if self.dim != 1 << from.len() {
            return Err(Error::DimensionMismatch { left: self.dim, right: 1 << from.len() });
        }
        let map = from.index_map(to)?;
        let mut out = CMatrix { dim: self.dim, data: vec![ZERO; self.dim * self.dim] };
        for (r, &jr) in map.iter().enumerate() {
            for (col, &jc) in map.iter().enumerate() {
                out[(jr, jc)] = self[(r, col)];
            }
        }
        Ok(out)
    }
}

/// Index of `|a 0 b 0⟩` in order `(1,2,3,4)` for kept qubits `a` (1) and `b` (3).
fn kept_index(k: usize) -> usize {
    let (a, b) = (k >> 1, k & 1);
    (a << 3) | (b << 1)
}

/// Post-selection of qubits 2 and 4 on `|0⟩` for a four-qubit state in order
/// `(1, 2, 3, 4)`.
///
/// The result lives on qubits `(1, 3)` and is left unnormalized: its squared
/// norm (vector) or trace (matrix) is the probability of the `(0, 0)` outcome.
pub trait ProjectAncillas: Sized {
    fn project_ancillas_to_zero(&self) -> Result<Self>;
}

impl ProjectAncillas for CVector {
    fn project_ancillas_to_zero(&self) -> Result<Self> {
        if self.dim() != MAX_DIM {
            return Err(Error::DimensionMismatch { left: self.dim(), right: MAX_DIM });
        }
        Ok(CVector { data: (0..4).map(|k| self.data[kept_index(k)]).collect() })
    }
}

impl ProjectAncillas for CMatrix {
    fn project_ancillas_to_zero(&self) -> Result<Self> {
        if self.dim != MAX_DIM {
            return Err(Error::DimensionMismatch { left: self.dim, right: MAX_DIM });
        }
        Ok(CMatrix::from_fn(4, |r, col| self[(kept_index(r), kept_index(col))]))
    }
}

pub(crate) trait SqrtExt {
    fn sqrt_libm(self) -> f64;
}

impl SqrtExt for f64 {
    fn sqrt_libm(self) -> f64 {
        libm::sqrt(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
        CMatrix::from_fn(dim, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> CVector {
        CVector::new((0..dim).map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect()).unwrap()
    }

    fn pauli_x() -> CMatrix {
        CMatrix::from_real_rows(1.0, [[0.0, 1.0], [1.0, 0.0]]).unwrap()
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = CMatrix::identity(2).unwrap();
        assert_eq!(i2.kron(&i2).unwrap(), CMatrix::identity(4).unwrap());
    }

    #[test]
    fn kron_x_identity_flips_first_qubit() {
        let xi = pauli_x().kron(&CMatrix::identity(2).unwrap()).unwrap();
        let v = xi.mul_vec(&CVector::basis(4, 0b00).unwrap());
        assert_eq!(v, CVector::basis(4, 0b10).unwrap());
    }

    #[test]
    fn kron_rejects_overflow() {
        let a = CMatrix::identity(4).unwrap();
        let b = CMatrix::identity(8).unwrap();
        assert_eq!(a.kron(&b), Err(Error::DimensionOverflow(32)));
    }

    #[test]
    fn kron_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (a, b, d) = (random_matrix(&mut rng, 2), random_matrix(&mut rng, 2), random_matrix(&mut rng, 4));
            let left = a.kron(&b).unwrap().kron(&d).unwrap();
            let right = a.kron(&b.kron(&d).unwrap()).unwrap();
            assert!(left.max_abs_diff(&right) <= 1e-12);
        }
    }

    #[test]
    fn invalid_dimensions_rejected() {
        assert_eq!(CMatrix::zeros(3), Err(Error::InvalidDimension(3)));
        assert_eq!(CVector::zeros(32), Err(Error::InvalidDimension(32)));
        assert!(matches!(CMatrix::new(2, vec![ZERO; 3]), Err(Error::LengthMismatch { .. })));
        assert_eq!(CVector::new(vec![c(f64::NAN, 0.0), ZERO]), Err(Error::NonFinite));
    }

    #[test]
    fn reorder_identity_when_orders_match() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = random_vector(&mut rng, 16);
        let order = QubitOrder::natural(4).unwrap();
        assert_eq!(v.reorder(&order, &order).unwrap(), v);
    }

    #[test]
    fn reorder_moves_basis_state() {
        // |0 1 0 1⟩ in order (1,3,2,4) means q1=0, q3=1, q2=0, q4=1 → |0 0 1 1⟩ in (1,2,3,4).
        let from = QubitOrder::new(&[1, 3, 2, 4]).unwrap();
        let to = QubitOrder::natural(4).unwrap();
        let v = CVector::basis(16, 0b0101).unwrap();
        assert_eq!(v.reorder(&from, &to).unwrap(), CVector::basis(16, 0b0011).unwrap());
    }

    #[test]
    fn reorder_rejects_mismatched_labels() {
        let v = CVector::zeros(16).unwrap();
        let from = QubitOrder::new(&[1, 2, 3, 4]).unwrap();
        let to = QubitOrder::new(&[1, 2, 3, 5]).unwrap();
        assert_eq!(v.reorder(&from, &to), Err(Error::QubitOrderMismatch));
        assert_eq!(QubitOrder::new(&[1, 1]), Err(Error::QubitOrderMismatch));
    }

    #[test]
    fn reorder_round_trips_and_preserves_norm_and_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = QubitOrder::new(&[1, 3, 2, 4]).unwrap();
        let b = QubitOrder::new(&[4, 1, 2, 3]).unwrap();
        for _ in 0..100 {
            let v = random_vector(&mut rng, 16);
            let w = v.reorder(&a, &b).unwrap();
            // same entries, permuted
            let key = |x: &CVector| {
                let mut e: Vec<(u64, u64)> = x.as_slice().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect();
                e.sort_unstable();
                e
            };
            assert_eq!(key(&w), key(&v));
            assert!((w.norm_sqr() - v.norm_sqr()).abs() <= 1e-15);
            assert_eq!(w.reorder(&b, &a).unwrap(), v);
        }
        let m = random_matrix(&mut rng, 16);
        let w = m.reorder(&a, &b).unwrap();
        assert_eq!(w.reorder(&b, &a).unwrap(), m);
        let mut d0: Vec<u64> = m.diagonal().iter().map(|z| z.re.to_bits()).collect();
        let mut d1: Vec<u64> = w.diagonal().iter().map(|z| z.re.to_bits()).collect();
        d0.sort_unstable();
        d1.sort_unstable();
        assert_eq!(d0, d1);
    }

    #[test]
    fn projection_keeps_zero_ancillas() {
        let v = CVector::basis(16, 0).unwrap().project_ancillas_to_zero().unwrap();
        assert_eq!(v, CVector::basis(4, 0).unwrap());
        assert_eq!(v.norm_sqr(), 1.0);
        // qubit 2 set
        let v = CVector::basis(16, 0b0100).unwrap().project_ancillas_to_zero().unwrap();
        assert_eq!(v.norm_sqr(), 0.0);
        // |1 0 1 0⟩ → |11⟩ on (1,3)
        let v = CVector::basis(16, 0b1010).unwrap().project_ancillas_to_zero().unwrap();
        assert_eq!(v, CVector::basis(4, 0b11).unwrap());
    }

    #[test]
    fn projection_of_density_is_psd_with_bounded_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let w = random_matrix(&mut rng, 16);
            let rho = &w * &w.dagger();
            let rho = rho.scale_real(1.0 / rho.trace().re);
            let p = rho.project_ancillas_to_zero().unwrap();
            assert!(is_hermitian(&p, 1e-10));
            assert!(is_psd(&p, 1e-10));
            let t = p.trace().re;
            assert!((0.0..=1.0).contains(&t));
        }
    }

    #[test]
    fn hermitian_and_psd_checks() {
        let mixed = CMatrix::identity(4).unwrap().scale_real(0.25);
        assert!(is_hermitian(&mixed, HERMITIAN_TOL));
        assert!(is_psd(&mixed, PSD_TOL));
        let d = CMatrix::diagonal_matrix(&[c(1.0, 0.0), c(-0.01, 0.0), ZERO, ZERO]).unwrap();
        assert!(!is_psd(&d, 1e-9));
        let mut nh = CMatrix::zeros(2).unwrap();
        nh[(0, 1)] = c(1.0, 0.0);
        assert!(!is_hermitian(&nh, 1e-10));
    }
}
