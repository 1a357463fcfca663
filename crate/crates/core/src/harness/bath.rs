// SPDX-License-Identifier: Apache-2.0

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dynamics::{HamiltonianSpec, Partition, Pauli, PauliWord, SpinSystem};
use crate::error::{Error, Result};
use crate::theory::hamiltonian_strengths;

const AXES: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

/// Parameters of a synthetic spin bath.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BathConfig {
    pub n_system: usize,
    pub n_bath: usize,
    pub seed: u64,
    /// Target `β = ‖H_B‖`.
    pub beta: f64,
    /// Target `J = ‖H_SB‖`.
    pub j: f64,
    /// Single-spin fields on each bath spin.
    pub local_fields: bool,
    /// Two-body couplings between every pair of bath spins.
    pub pairwise: bool,
}

impl Default for BathConfig {
    fn default() -> Self {
        Self { n_system: 1, n_bath: 4, seed: 0, beta: 1.0, j: 0.1, local_fields: true, pairwise: true }
    }
}

/// A norm-controlled bath Hamiltonian together with its spin layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Bath {
    pub spec: HamiltonianSpec,
    pub system: SpinSystem,
    pub j: f64,
    pub beta: f64,
}

impl Bath {
    pub fn is_pessimistic(&self) -> bool {
        crate::theory::is_pessimistic(self.j, self.beta)
    }
}

/// Random 1-local system–bath couplings plus bath fields and pair couplings,
/// with Gaussian coefficients, rescaled so that `‖H_SB‖ = j` and `‖H_B‖ = beta`.
pub fn make_bath(cfg: &BathConfig) -> Result<Bath> {
    if cfg.n_bath == 0 {
        return Err(Error::InvalidConfig("bath needs at least one spin".into()));
    }
    if !(cfg.beta >= 0.0 && cfg.j >= 0.0 && cfg.beta.is_finite() && cfg.j.is_finite()) {
        return Err(Error::InvalidConfig("bath strengths must be finite and non-negative".into()));
    }
    let sys = SpinSystem::new(cfg.n_system, cfg.n_bath)?;
    let n = sys.n_spins();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut gauss = || -> f64 { StandardNormal.sample(&mut rng) };
    let mut spec = HamiltonianSpec::default();

    for s in 0..cfg.n_system {
        for b in cfg.n_system..n {
            for a in AXES {
                for c in AXES {
                    spec.push(gauss(), PauliWord::with_sites(n, &[(s, a), (b, c)]));
                }
            }
        }
    }
    if cfg.local_fields {
        for b in cfg.n_system..n {
            for a in AXES {
                spec.push(gauss(), PauliWord::with_sites(n, &[(b, a)]));
            }
        }
    }
    if cfg.pairwise {
        for b1 in cfg.n_system..n {
            for b2 in b1 + 1..n {
                for a in AXES {
                    for c in AXES {
                        spec.push(gauss(), PauliWord::with_sites(n, &[(b1, a), (b2, c)]));
                    }
                }
            }
        }
    }

    let (j0, beta0) = hamiltonian_strengths(&spec, &sys)?;
    if beta0 == 0.0 && cfg.beta > 0.0 {
        return Err(Error::InvalidConfig("bath structure has no internal terms to carry beta".into()));
    }
    spec.scale_part(Partition::Coupling, &sys, cfg.j / j0);
    spec.scale_part(Partition::Bath, &sys, if beta0 > 0.0 { cfg.beta / beta0 } else { 0.0 });
    spec.terms.retain(|t| t.coefficient != 0.0);
    Ok(Bath { spec, system: sys, j: cfg.j, beta: cfg.beta })
}
