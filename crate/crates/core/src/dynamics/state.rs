// SPDX-License-Identifier: Apache-2.0

use nalgebra::DVector;

use super::SpinSystem;
use crate::error::{Error, Result};
use crate::linalg::{self, HermitianEigen, Matrix, C64};

const HERMITIAN_TOL: f64 = 1e-12;
const STATE_TOL: f64 = 1e-10;

/// Dense square operator on the joint (or system) space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: Matrix,
    hermitian: bool,
}

impl Operator {
    /// Wraps any square matrix, recording whether it is Hermitian.
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let hermitian = linalg::hermiticity_defect(&matrix) <= HERMITIAN_TOL * matrix.norm().max(1.0);
        Ok(Self { matrix, hermitian })
    }

    /// Requires the matrix to be Hermitian within `1e-12` (relative to its norm).
    pub fn hermitian(matrix: Matrix) -> Result<Self> {
        let op = Self::new(matrix)?;
        if !op.hermitian {
            return Err(Error::NotHermitian(linalg::hermiticity_defect(&op.matrix)));
        }
        Ok(op)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        if self.hermitian {
            linalg::hermitian_spectral_norm(&self.matrix)
        } else {
            linalg::spectral_norm(&self.matrix)
        }
    }

    /// Frobenius norm of `U†U − I`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.matrix.adjoint() * &self.matrix - linalg::identity(self.dim())).norm()
    }
}

/// A valid (Hermitian, unit-trace, positive semidefinite) density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Matrix);

impl DensityMatrix {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let rho = Self(matrix);
        rho.validate()?;
        Ok(rho)
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.0;
        if !m.is_square() {
            return Err(Error::InvalidState("not square".into()));
        }
        let defect = linalg::hermiticity_defect(m);
        if defect > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:e})")));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = self.eigenvalues().iter().fold(f64::INFINITY, |a, &b| a.min(b));
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn from_pure(psi: &DVector<C64>) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v = psi.unscale(norm);
        Ok(Self(&v * v.adjoint()))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(linalg::identity(dim).unscale(dim as f64))
    }

    /// `|0⟩⟨0|` on `n_qubits` qubits.
    pub fn ground(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        let mut m = Matrix::zeros(dim, dim);
        m[(0, 0)] = C64::new(1.0, 0.0);
        Self(m)
    }

    /// `|+⟩^{⊗n}`, the equal superposition on every qubit.
    pub fn plus(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        Self(Matrix::from_element(dim, dim, C64::new(1.0 / dim as f64, 0.0)))
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self(self.0.kronecker(&other.0))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        HermitianEigen::new(&self.0).values.iter().copied().collect()
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &Matrix) -> DensityMatrix {
        Self(linalg::hermitize(&(u * &self.0 * u.adjoint())))
    }
}

/// Partial trace over every bath spin.
pub fn reduced_state(rho: &DensityMatrix, sys: &SpinSystem) -> Result<DensityMatrix> {
    if rho.dim() != sys.dim() {
        return Err(Error::DimensionMismatch { expected: sys.dim(), found: rho.dim() });
    }
    let reduced = linalg::partial_trace_b(rho.matrix(), sys.dim_system(), sys.dim_bath());
    Ok(DensityMatrix(linalg::hermitize(&reduced)))
}
