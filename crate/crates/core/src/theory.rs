// SPDX-License-Identifier: Apache-2.0

//! Distance bounds for CDD and PDD in the regime `J < β`, and the
//! concatenation levels they imply.
//!
//! All bounds depend on the dimensionless products `J·τ₀` and `β·τ₀` only.
//! They carry unspecified constants, so they are trends rather than rigorous
//! inequalities.

use serde::{Deserialize, Serialize};

use crate::dynamics::{build_operator, HamiltonianSpec, Partition, SpinSystem};
use crate::error::{Error, Result};

fn log4(x: f64) -> f64 {
    x.log2() / 2.0
}

/// Inputs to the bound calculators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryParams {
    pub j: f64,
    pub beta: f64,
    pub tau0: f64,
    pub n: u32,
    pub n_pulses: u64,
    pub delta_star: f64,
}

impl TheoryParams {
    pub fn j_tau0(&self) -> f64 {
        self.j * self.tau0
    }

    pub fn beta_tau0(&self) -> f64 {
        self.beta * self.tau0
    }
}

/// `J = ‖H_SB‖` and `β = ‖H_B‖` (spectral norms).
pub fn hamiltonian_strengths(h: &HamiltonianSpec, sys: &SpinSystem) -> Result<(f64, f64)> {
    let j = build_operator(&h.part(Partition::Coupling, sys), sys)?.spectral_norm();
    let beta = build_operator(&h.part(Partition::Bath, sys), sys)?.spectral_norm();
    Ok((j, beta))
}

/// Threshold parameter `ε = 4βτ₀·2ⁿ`.
pub fn epsilon(beta: f64, tau0: f64, n: u32) -> f64 {
    4.0 * beta * tau0 * 2f64.powi(n as i32)
}

/// CDD_n distance bound `2Jτ₀·εⁿ`.
pub fn cdd_bound(j: f64, beta: f64, tau0: f64, n: u32) -> f64 {
    cdd_bound_real(j, beta, tau0, n as f64)
}

/// [`cdd_bound`] at a real-valued level.
pub fn cdd_bound_real(j: f64, beta: f64, tau0: f64, n: f64) -> f64 {
    let eps = 4.0 * beta * tau0 * 2f64.powf(n);
    2.0 * j * tau0 * eps.powf(n)
}

/// PDD bound `2N·Jτ₀·βτ₀` for `N` pulses.
pub fn pdd_bound(j: f64, beta: f64, tau0: f64, n_pulses: u64) -> f64 {
    2.0 * n_pulses as f64 * j * tau0 * beta * tau0
}

/// Level at which the CDD bound equals `delta_star`, before rounding.
pub fn required_level_continuous(j: f64, beta: f64, tau0: f64, delta_star: f64) -> Result<f64> {
    let shift = 1.0 + log4(beta * tau0);
    let discriminant = shift * shift - 2.0 * log4(j * tau0 / delta_star) - 1.0;
    if discriminant < 0.0 || !discriminant.is_finite() {
        return Err(Error::TargetUnreachable { discriminant });
    }
    Ok(-discriminant.sqrt() - shift)
}

/// Smallest concatenation level reaching `delta_star`, rounded to the nearest
/// integer and clamped at zero.
pub fn required_level(j: f64, beta: f64, tau0: f64, delta_star: f64) -> Result<u32> {
    let n = required_level_continuous(j, beta, tau0, delta_star)?;
    Ok(n.round().max(0.0) as u32)
}

/// Minimizer of the CDD bound over real `n`: `log₄(1/βτ₀) − 1`.
pub fn optimal_level_continuous(beta: f64, tau0: f64) -> f64 {
    log4(1.0 / (beta * tau0)) - 1.0
}

/// `⌊log₄(1/βτ₀) − 1⌋`, clamped at zero.
pub fn optimal_level(beta: f64, tau0: f64) -> u32 {
    optimal_level_continuous(beta, tau0).floor().max(0.0) as u32
}

/// `true` in the regime `J < β`, where bath dynamics dominate.
pub fn is_pessimistic(j: f64, beta: f64) -> bool {
    j < beta
}

/// Everything the `theory` subcommand reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryReport {
    pub j: f64,
    pub beta: f64,
    pub tau0: f64,
    pub j_tau0: f64,
    pub beta_tau0: f64,
    pub pessimistic: bool,
    pub level: Option<u32>,
    pub epsilon: Option<f64>,
    pub cdd_bound: Option<f64>,
    pub pdd_bound: Option<f64>,
    pub pdd_pulses: Option<u64>,
    pub optimal_level: u32,
    pub optimal_level_continuous: f64,
    pub target: Option<f64>,
    pub required_level: Option<u32>,
    pub required_level_continuous: Option<f64>,
}

/// Builds a report; the PDD bound uses `N = 4ⁿ` pulses (equal total time)
/// unless `n_pulses` is given.
pub fn report(
    j: f64,
    beta: f64,
    tau0: f64,
    level: Option<u32>,
    target: Option<f64>,
    n_pulses: Option<u64>,
) -> Result<TheoryReport> {
    for (name, v) in [("j", j), ("beta", beta), ("tau0", tau0)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
        }
    }
    let pdd_pulses = n_pulses.or_else(|| level.map(|n| 4u64.saturating_pow(n)));
    let (required, required_cont) = match target {
        Some(t) => {
            let c = required_level_continuous(j, beta, tau0, t)?;
            (Some(c.round().max(0.0) as u32), Some(c))
        }
        None => (None, None),
    };
    Ok(TheoryReport {
        j,
        beta,
        tau0,
        j_tau0: j * tau0,
        beta_tau0: beta * tau0,
        pessimistic: is_pessimistic(j, beta),
        level,
        epsilon: level.map(|n| epsilon(beta, tau0, n)),
        cdd_bound: level.map(|n| cdd_bound(j, beta, tau0, n)),
        pdd_bound: pdd_pulses.map(|p| pdd_bound(j, beta, tau0, p)),
        pdd_pulses,
        optimal_level: optimal_level(beta, tau0),
        optimal_level_continuous: optimal_level_continuous(beta, tau0),
        target,
        required_level: required,
        required_level_continuous: required_cont,
    })
}
