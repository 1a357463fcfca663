// SPDX-License-Identifier: Apache-2.0

//! Simulation and analysis of concatenated dynamical decoupling.
//!
//! - [`sequence`] compiles CDD/PDD pulse schedules with finite pulse width
//!   and phase-change delays.
//! - [`dynamics`] builds qubit plus spin-bath Hamiltonians and evolves states
//!   through a schedule.
//! - [`metrics`] holds trace distance, fidelity, the transverse magnetization
//!   signal and exponential decay fitting.
//! - [`theory`] evaluates the CDD/PDD distance bounds and level selection.
//! - [`harness`] runs seeded experiments and τ₀ sweeps.

pub mod dynamics;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod sequence;
pub mod theory;

pub use error::{Error, Result};
