// SPDX-License-Identifier: Apache-2.0

//! Joint system–bath Hamiltonians and exact unitary evolution through a
//! compiled schedule.
//!
//! System qubits occupy the leading tensor factors; the bath follows. Units
//! have ħ = 1, so only products such as `β·τ₀` carry physical meaning.

mod evolve;
mod hamiltonian;
mod state;

use serde::{Deserialize, Serialize};

pub use evolve::{effective_coupling_norm, effective_hamiltonian, propagator, run_schedule, Generator, Simulator};
pub use hamiltonian::{
    build_operator, decompose_hamiltonian, Decomposition, HamiltonianSpec, Partition, Pauli, PauliWord, Term,
};
pub use state::{reduced_state, DensityMatrix, Operator};

/// Qubit register plus bath spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinSystem {
    pub n_system: usize,
    pub n_bath: usize,
}

impl SpinSystem {
    pub fn new(n_system: usize, n_bath: usize) -> crate::Result<Self> {
        if n_system == 0 {
            return Err(crate::Error::InvalidConfig("need at least one system qubit".into()));
        }
        if n_system + n_bath > 12 {
            return Err(crate::Error::InvalidConfig(format!(
                "{} spins is beyond dense simulation range",
                n_system + n_bath
            )));
        }
        Ok(Self { n_system, n_bath })
    }

    pub fn n_spins(&self) -> usize {
        self.n_system + self.n_bath
    }

    pub fn dim(&self) -> usize {
        1 << self.n_spins()
    }

    pub fn dim_system(&self) -> usize {
        1 << self.n_system
    }

    pub fn dim_bath(&self) -> usize {
        1 << self.n_bath
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseMode {
    /// Instantaneous, perfect π rotations.
    Ideal,
    /// Square control `(Ω/2)·Σσ_axis` with `Ω = π/δ` over the pulse width.
    FiniteWidth,
}

/// How pulses act during simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PulseModel {
    pub mode: PulseMode,
    /// Whether the full Hamiltonian keeps acting while a finite pulse is on.
    #[serde(default = "default_drift")]
    pub drift_during_pulse: bool,
}

fn default_drift() -> bool {
    true
}

impl Default for PulseModel {
    fn default() -> Self {
        Self::ideal()
    }
}

impl PulseModel {
    pub fn ideal() -> Self {
        Self { mode: PulseMode::Ideal, drift_during_pulse: true }
    }

    pub fn finite_width(drift_during_pulse: bool) -> Self {
        Self { mode: PulseMode::FiniteWidth, drift_during_pulse }
    }
}
