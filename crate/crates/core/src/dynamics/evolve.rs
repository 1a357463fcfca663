// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::f64::consts::PI;

use super::{
    build_operator, decompose_hamiltonian, DensityMatrix, HamiltonianSpec, Operator, PulseMode, PulseModel, SpinSystem,
};
use crate::error::{Error, Result};
use crate::linalg::{self, HermitianEigen, Matrix, C64};
use crate::sequence::{EventKind, PulseAxis, Schedule};

/// Eigenphases closer than this to ±π are refused by the matrix logarithm.
const BRANCH_MARGIN: f64 = 1e-6;

/// Hermitian generator with a cached eigendecomposition, so repeated
/// propagators cost one matrix product each.
#[derive(Debug, Clone)]
pub struct Generator {
    eigen: HermitianEigen,
}

impl Generator {
    pub fn new(h: &Operator) -> Result<Self> {
        if !h.is_hermitian() {
            return Err(Error::NotHermitian(linalg::hermiticity_defect(h.matrix())));
        }
        Ok(Self { eigen: HermitianEigen::new(h.matrix()) })
    }

    /// `exp(-iHt)`.
    pub fn propagator(&self, t: f64) -> Matrix {
        self.eigen.map(|e| C64::from_polar(1.0, -e * t))
    }
}

/// `exp(-iHt)` through the Hermitian eigendecomposition of `H`.
pub fn propagator(h: &Operator, t: f64) -> Result<Operator> {
    let u = Generator::new(h)?.propagator(t);
    Operator::new(u)
}

/// Hermitian `H_eff` with `U = exp(-i H_eff t)`, eigenphases taken in (−π, π).
///
/// Uses the Cayley map `i(I − U)(I + U)⁻¹`, which is Hermitian with
/// eigenvalues `tan(φ/2)`, so only a Hermitian eigensolver is needed.
pub fn effective_hamiltonian(u: &Matrix, t: f64) -> Result<Matrix> {
    if t <= 0.0 {
        return Err(Error::InvalidTiming("effective Hamiltonian needs a positive duration".into()));
    }
    let dim = u.nrows();
    let id = linalg::identity(dim);
    let cayley = (&id + u).lu().solve(&(&id - u)).ok_or(Error::BranchCut { phase: PI })?.map(|v| v * linalg::I);
    let eigen = HermitianEigen::new(&cayley);
    let limit = ((PI - BRANCH_MARGIN) / 2.0).tan();
    if let Some(&bad) = eigen.values.iter().find(|v| v.abs() > limit || !v.is_finite()) {
        return Err(Error::BranchCut { phase: 2.0 * bad.atan() });
    }
    Ok(eigen.map(|v| C64::new(-2.0 * v.atan() / t, 0.0)))
}

/// Propagates states and unitaries through schedules for one Hamiltonian.
///
/// Step propagators are cached per duration, so sweeping many schedules with
/// the same timing reuses them.
#[derive(Debug, Clone)]
pub struct Simulator {
    sys: SpinSystem,
    model: PulseModel,
    drift: Matrix,
    generator: Generator,
    free_cache: HashMap<u64, Matrix>,
    pulse_cache: HashMap<(PulseAxis, u64), Matrix>,
}

impl Simulator {
    pub fn new(spec: &HamiltonianSpec, sys: SpinSystem, model: PulseModel) -> Result<Self> {
        Self::from_operator(&build_operator(spec, &sys)?, sys, model)
    }

    pub fn from_operator(h: &Operator, sys: SpinSystem, model: PulseModel) -> Result<Self> {
        if h.dim() != sys.dim() {
            return Err(Error::DimensionMismatch { expected: sys.dim(), found: h.dim() });
        }
        Ok(Self {
            sys,
            model,
            drift: h.matrix().clone(),
            generator: Generator::new(h)?,
            free_cache: HashMap::new(),
            pulse_cache: HashMap::new(),
        })
    }

    pub fn system(&self) -> &SpinSystem {
        &self.sys
    }

    pub fn model(&self) -> PulseModel {
        self.model
    }

    fn free_step(&mut self, t: f64) -> &Matrix {
        let generator = &self.generator;
        self.free_cache.entry(t.to_bits()).or_insert_with(|| generator.propagator(t))
    }

    /// `exp(−iHt)` with no pulses.
    pub fn free_unitary(&mut self, t: f64) -> Matrix {
        self.free_step(t).clone()
    }

    /// Σ_j σ_axis on every system qubit, identity on the bath.
    fn collective(&self, axis: PulseAxis) -> Matrix {
        let mut acc = Matrix::zeros(self.sys.dim(), self.sys.dim());
        for j in 0..self.sys.n_system {
            let factors: Vec<Matrix> =
                (0..self.sys.n_spins()).map(|k| if k == j { axis.pauli() } else { linalg::identity(2) }).collect();
            acc += linalg::kron_all(&factors);
        }
        acc
    }

    /// Instantaneous collective π rotation `⊗_j (−iσ_j) ⊗ I_B`.
    pub fn ideal_pulse(&self, axis: PulseAxis) -> Matrix {
        let rot = axis.pi_rotation();
        let sys_part = linalg::kron_all(&vec![rot; self.sys.n_system]);
        sys_part.kronecker(&linalg::identity(self.sys.dim_bath()))
    }

    fn pulse_step(&mut self, axis: PulseAxis, width: f64) -> Result<Matrix> {
        if width == 0.0 {
            return Ok(self.ideal_pulse(axis));
        }
        if self.model.mode == PulseMode::Ideal {
            return Err(Error::InvalidPulseModel("ideal pulses need a schedule with zero pulse width".into()));
        }
        if let Some(u) = self.pulse_cache.get(&(axis, width.to_bits())) {
            return Ok(u.clone());
        }
        let omega = PI / width;
        let mut h = self.collective(axis).scale(omega / 2.0);
        if self.model.drift_during_pulse {
            h += &self.drift;
        }
        let u = Generator::new(&Operator::hermitian(h)?)?.propagator(width);
        self.pulse_cache.insert((axis, width.to_bits()), u.clone());
        Ok(u)
    }

    /// Joint unitary over the whole schedule.
    pub fn schedule_unitary(&mut self, s: &Schedule) -> Result<Matrix> {
        let base = s.timing.base;
        let mut u = linalg::identity(self.sys.dim());
        for ev in &s.events {
            let t = base.to_units(ev.kind.duration());
            u = match ev.kind {
                EventKind::Free { .. } | EventKind::PhaseGap { .. } => {
                    if t == 0.0 {
                        continue;
                    }
                    self.free_step(t) * &u
                }
                EventKind::Pulse { axis, .. } => self.pulse_step(axis, t)? * &u,
            };
        }
        Ok(u)
    }

    /// Product of the ideal collective rotations in the schedule.
    pub fn net_pulse_operator(&self, s: &Schedule) -> Matrix {
        s.events
            .iter()
            .filter_map(|e| e.kind.axis())
            .fold(linalg::identity(self.sys.dim()), |acc, a| self.ideal_pulse(a) * acc)
    }

    pub fn run(&mut self, s: &Schedule, rho0: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_state(rho0)?;
        Ok(rho0.conjugate(&self.schedule_unitary(s)?))
    }

    pub fn evolve_free(&mut self, t: f64, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_state(rho)?;
        let u = self.free_step(t).clone();
        Ok(rho.conjugate(&u))
    }

    fn check_state(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.sys.dim() {
            return Err(Error::DimensionMismatch { expected: self.sys.dim(), found: rho.dim() });
        }
        Ok(())
    }

    /// Time-averaged Hamiltonian of the schedule in the toggling frame: the
    /// net pulse rotation is divided out before taking the logarithm.
    pub fn effective_hamiltonian(&mut self, s: &Schedule) -> Result<Matrix> {
        let t = s.total_duration_units();
        let u = self.schedule_unitary(s)?;
        let frame = self.net_pulse_operator(s);
        effective_hamiltonian(&(frame.adjoint() * u), t)
    }

    pub fn effective_coupling_norm(&mut self, s: &Schedule) -> Result<f64> {
        let h_eff = self.effective_hamiltonian(s)?;
        Ok(decompose_hamiltonian(&h_eff, &self.sys)?.coupling_norm())
    }
}

/// Evolves `rho0` through the schedule and returns the joint state at its end.
pub fn run_schedule(
    s: &Schedule,
    h: &HamiltonianSpec,
    sys: SpinSystem,
    pm: PulseModel,
    rho0: &DensityMatrix,
) -> Result<DensityMatrix> {
    Simulator::new(h, sys, pm)?.run(s, rho0)
}

/// Spectral norm of the coupling part of the schedule's effective Hamiltonian.
pub fn effective_coupling_norm(s: &Schedule, h: &HamiltonianSpec, sys: SpinSystem, pm: PulseModel) -> Result<f64> {
    Simulator::new(h, sys, pm)?.effective_coupling_norm(s)
}
