// SPDX-License-Identifier: Apache-2.0

//! State-preservation measures: trace distance, fidelity, the transverse
//! magnetization signal, and exponential decay fitting.

mod fit;

pub use fit::{fit_exponential, DecayCurve, DecaySample, FitResult, ZERO_DECAY_RATE};

use crate::dynamics::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, HermitianEigen, C64};

const NEGATIVE_TOL: f64 = 1e-10;

fn same_dim(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    Ok(())
}

/// `½‖ρ − σ‖₁`; the difference is Hermitian, so its singular values are the
/// absolute eigenvalues.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    let eig = HermitianEigen::new(&diff);
    Ok(0.5 * eig.values.iter().map(|v| v.abs()).sum::<f64>())
}

/// Eigenvalues below this are roundoff from a rank-deficient state; their
/// square roots (~1e-8) would otherwise leak into the fidelity.
const ROUNDOFF_EIGENVALUE: f64 = 1e-14;

fn sqrt_psd(rho: &DensityMatrix) -> Result<linalg::Matrix> {
    let eig = HermitianEigen::new(rho.matrix());
    if let Some(&v) = eig.values.iter().find(|&&v| v < -NEGATIVE_TOL) {
        return Err(Error::InvalidState(format!("negative eigenvalue {v:e}")));
    }
    Ok(eig.map(|v| C64::new(if v > ROUNDOFF_EIGENVALUE { v.sqrt() } else { 0.0 }, 0.0)))
}

/// `‖√ρ √σ‖₁`, the sum of singular values of `√ρ √σ`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    let product = sqrt_psd(rho)? * sqrt_psd(sigma)?;
    let f: f64 = product.singular_values().iter().sum();
    Ok(f.min(1.0))
}

/// `√(Tr[σx ρ]² + Tr[σy ρ]²)` for a single-qubit state.
pub fn magnetization(rho_s: &DensityMatrix) -> Result<f64> {
    if rho_s.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: rho_s.dim() });
    }
    let mx = (linalg::sigma_x() * rho_s.matrix()).trace().re;
    let my = (linalg::sigma_y() * rho_s.matrix()).trace().re;
    Ok(mx.hypot(my))
}
