// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrix helpers shared by the simulator and the metrics.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Matrix = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn identity(dim: usize) -> Matrix {
    Matrix::identity(dim, dim)
}

pub fn sigma_x() -> Matrix {
    Matrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn sigma_y() -> Matrix {
    Matrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn sigma_z() -> Matrix {
    Matrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// Kronecker product of a list of factors, leftmost factor most significant.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a Matrix>) -> Matrix {
    factors.into_iter().fold(identity(1), |acc, f| acc.kronecker(f))
}

/// Frobenius norm of `m - m†`.
pub fn hermiticity_defect(m: &Matrix) -> f64 {
    (m - m.adjoint()).norm()
}

pub fn hermitize(m: &Matrix) -> Matrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues in ascending
/// order and the unitary whose columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: DVector<f64>,
    pub vectors: Matrix,
}

impl HermitianEigen {
    /// The input is symmetrized first, so tiny anti-Hermitian noise is dropped.
    pub fn new(m: &Matrix) -> Self {
        let eig = hermitize(m).symmetric_eigen();
        let n = eig.eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
        let mut vectors = Matrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        Self { values, vectors }
    }

    /// `V f(Λ) V†` for a real spectral function.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> Matrix {
        let scaled = Matrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |r, c| {
            self.vectors[(r, c)] * f(self.values[c])
        });
        scaled * self.vectors.adjoint()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Largest singular value of a Hermitian matrix.
pub fn hermitian_spectral_norm(m: &Matrix) -> f64 {
    HermitianEigen::new(m).max_abs()
}

/// Largest singular value of an arbitrary square matrix.
pub fn spectral_norm(m: &Matrix) -> f64 {
    m.clone().singular_values().iter().fold(0.0_f64, |a, &b| a.max(b))
}

/// Trace over the trailing factor of a `dim_a * dim_b` bipartite operator.
pub fn partial_trace_b(m: &Matrix, dim_a: usize, dim_b: usize) -> Matrix {
    Matrix::from_fn(dim_a, dim_a, |i, j| (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum())
}

/// Trace over the leading factor of a `dim_a * dim_b` bipartite operator.
pub fn partial_trace_a(m: &Matrix, dim_a: usize, dim_b: usize) -> Matrix {
    Matrix::from_fn(dim_b, dim_b, |i, j| (0..dim_a).map(|k| m[(k * dim_b + i, k * dim_b + j)]).sum())
}
