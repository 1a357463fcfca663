// SPDX-License-Identifier: Apache-2.0

//! Compilation of concatenated (CDD) and periodic (PDD) decoupling sequences
//! into absolute-time schedules.
//!
//! Operator expressions such as `Z[U] X[U] Z[U] X[U]` read right to left in
//! time. Schedules store events in execution order, so a CDD₁ cycle is
//! `free, X, free, Z, free, X, free, Z`.
//!
//! Durations are integer tick counts. Back-to-back pulses are post-processed
//! the way they would be on hardware: a same-axis pair with nothing between
//! them is dropped, a different-axis pair gets a phase-change gap `f_a`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Default cap on the number of events a compiled schedule may hold.
pub const DEFAULT_MAX_EVENTS: usize = 10_000_000;

/// A duration or instant measured in integer ticks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ticks(pub u64);

impl Ticks {
    pub const ZERO: Ticks = Ticks(0);

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for Ticks {
    type Output = Ticks;
    fn add(self, rhs: Ticks) -> Ticks {
        Ticks(self.0 + rhs.0)
    }
}

impl AddAssign for Ticks {
    fn add_assign(&mut self, rhs: Ticks) {
        self.0 += rhs.0;
    }
}

impl Mul<u64> for Ticks {
    type Output = Ticks;
    fn mul(self, rhs: u64) -> Ticks {
        Ticks(self.0 * rhs)
    }
}

impl Sum for Ticks {
    fn sum<I: Iterator<Item = Ticks>>(iter: I) -> Ticks {
        iter.fold(Ticks::ZERO, Add::add)
    }
}

/// Resolution of the tick clock, as the number of ticks in one time unit.
///
/// The default of 1000 gives a 1 ns tick when the time unit is the microsecond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TimeBase {
    pub ticks_per_unit: u64,
}

impl Default for TimeBase {
    fn default() -> Self {
        Self { ticks_per_unit: 1000 }
    }
}

impl TimeBase {
    pub fn new(ticks_per_unit: u64) -> Result<Self> {
        if ticks_per_unit == 0 {
            return Err(Error::InvalidTiming("ticks_per_unit must be positive".into()));
        }
        Ok(Self { ticks_per_unit })
    }

    /// Rounds a non-negative duration in time units to the nearest tick.
    pub fn to_ticks(self, units: f64) -> Result<Ticks> {
        if !units.is_finite() || units < 0.0 {
            return Err(Error::InvalidTiming(format!("duration {units} is not a finite non-negative number")));
        }
        let ticks = (units * self.ticks_per_unit as f64).round();
        if ticks > u64::MAX as f64 / 2.0 {
            return Err(Error::InvalidTiming(format!("duration {units} overflows the tick clock")));
        }
        Ok(Ticks(ticks as u64))
    }

    pub fn to_units(self, ticks: Ticks) -> f64 {
        ticks.0 as f64 / self.ticks_per_unit as f64
    }
}

/// Axis of an ideal π rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PulseAxis {
    X,
    Y,
    Z,
}

impl PulseAxis {
    pub const ALL: [PulseAxis; 3] = [PulseAxis::X, PulseAxis::Y, PulseAxis::Z];

    /// Pauli matrix of this axis.
    pub fn pauli(self) -> Matrix {
        match self {
            PulseAxis::X => linalg::sigma_x(),
            PulseAxis::Y => linalg::sigma_y(),
            PulseAxis::Z => linalg::sigma_z(),
        }
    }

    /// `exp(-iπσ/2) = -iσ`, the π rotation a pulse about this axis performs.
    pub fn pi_rotation(self) -> Matrix {
        self.pauli().map(|v| v * -linalg::I)
    }
}

impl fmt::Display for PulseAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            PulseAxis::X => "X",
            PulseAxis::Y => "Y",
            PulseAxis::Z => "Z",
        };
        f.write_str(c)
    }
}

impl FromStr for PulseAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "X" | "x" => Ok(PulseAxis::X),
            "Y" | "y" => Ok(PulseAxis::Y),
            "Z" | "z" => Ok(PulseAxis::Z),
            other => Err(Error::InvalidConfig(format!("unknown pulse axis {other:?}"))),
        }
    }
}

/// The ordered pair in the universal decoupler `A[·] B[·] A[·] B[·]`,
/// stored as written (`A`, `B`). In execution order a cycle runs
/// `free, B, free, A, free, B, free, A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasePair {
    pub outer: PulseAxis,
    pub inner: PulseAxis,
}

impl Default for BasePair {
    fn default() -> Self {
        Self { outer: PulseAxis::Z, inner: PulseAxis::X }
    }
}

impl BasePair {
    pub fn new(outer: PulseAxis, inner: PulseAxis) -> Result<Self> {
        if outer == inner {
            return Err(Error::DegenerateBasePair(outer));
        }
        Ok(Self { outer, inner })
    }
}

impl FromStr for BasePair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() != 2 {
            return Err(Error::InvalidConfig(format!("base pair {s:?} must be two axis letters")));
        }
        BasePair::new(chars[0].to_string().parse()?, chars[1].to_string().parse()?)
    }
}

impl fmt::Display for BasePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.outer, self.inner)
    }
}

/// Pulse interval `tau0`, π-pulse width `delta` and phase-change delay `fa`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimingParams {
    pub tau0: Ticks,
    pub delta: Ticks,
    pub fa: Ticks,
    #[serde(default)]
    pub base: TimeBase,
}

impl TimingParams {
    pub fn new(tau0: Ticks, delta: Ticks, fa: Ticks, base: TimeBase) -> Result<Self> {
        let t = Self { tau0, delta, fa, base };
        t.validate()?;
        Ok(t)
    }

    /// Zero-width pulses and no phase-change delay.
    pub fn ideal(tau0: Ticks, base: TimeBase) -> Result<Self> {
        Self::new(tau0, Ticks::ZERO, Ticks::ZERO, base)
    }

    /// Builds timing from durations in time units, rounded to the tick grid.
    pub fn from_units(tau0: f64, delta: f64, fa: f64, base: TimeBase) -> Result<Self> {
        Self::new(base.to_ticks(tau0)?, base.to_ticks(delta)?, base.to_ticks(fa)?, base)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tau0.is_zero() {
            return Err(Error::InvalidTiming("tau0 must be positive".into()));
        }
        if self.base.ticks_per_unit == 0 {
            return Err(Error::InvalidTiming("ticks_per_unit must be positive".into()));
        }
        Ok(())
    }

    pub fn is_ideal(&self) -> bool {
        self.delta.is_zero() && self.fa.is_zero()
    }

    pub fn tau0_units(&self) -> f64 {
        self.base.to_units(self.tau0)
    }
}

/// Raw sequence token before simplification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    Free,
    Pulse(PulseAxis),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    Free { duration: Ticks },
    Pulse { axis: PulseAxis, duration: Ticks },
    PhaseGap { duration: Ticks },
}

impl EventKind {
    pub fn duration(&self) -> Ticks {
        match *self {
            EventKind::Free { duration } | EventKind::Pulse { duration, .. } | EventKind::PhaseGap { duration } => {
                duration
            }
        }
    }

    pub fn axis(&self) -> Option<PulseAxis> {
        match *self {
            EventKind::Pulse { axis, .. } => Some(axis),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EventKind::Free { .. } => "free",
            EventKind::Pulse { .. } => "pulse",
            EventKind::PhaseGap { .. } => "phase_gap",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleEvent {
    pub kind: EventKind,
    pub start: Ticks,
}

impl ScheduleEvent {
    pub fn end(&self) -> Ticks {
        self.start + self.kind.duration()
    }
}

/// A compiled, time-ordered pulse schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub events: Vec<ScheduleEvent>,
    pub timing: TimingParams,
    pub label: String,
}

/// JSON summary of a schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSummary {
    pub label: String,
    pub pulse_count: usize,
    pub phase_gap_count: usize,
    pub free_count: usize,
    pub total_duration_ticks: u64,
    pub total_duration: f64,
    pub ticks_per_unit: u64,
}

impl Schedule {
    fn from_kinds(kinds: Vec<EventKind>, timing: TimingParams, label: String) -> Self {
        let mut start = Ticks::ZERO;
        let events = kinds
            .into_iter()
            .map(|kind| {
                let ev = ScheduleEvent { kind, start };
                start += kind.duration();
                ev
            })
            .collect();
        Self { events, timing, label }
    }

    pub fn total_duration(&self) -> Ticks {
        self.events.iter().map(|e| e.kind.duration()).sum()
    }

    pub fn total_duration_units(&self) -> f64 {
        self.timing.base.to_units(self.total_duration())
    }

    pub fn pulse_count(&self) -> usize {
        self.events.iter().filter(|e| matches!(e.kind, EventKind::Pulse { .. })).count()
    }

    pub fn phase_gap_count(&self) -> usize {
        self.events.iter().filter(|e| matches!(e.kind, EventKind::PhaseGap { .. })).count()
    }

    pub fn free_count(&self) -> usize {
        self.events.iter().filter(|e| matches!(e.kind, EventKind::Free { .. })).count()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// The schedule with durations stripped, as fed to [`SequenceCompiler::simplify`].
    pub fn steps(&self) -> Vec<Step> {
        self.events
            .iter()
            .filter_map(|e| match e.kind {
                EventKind::Free { .. } => Some(Step::Free),
                EventKind::Pulse { axis, .. } => Some(Step::Pulse(axis)),
                EventKind::PhaseGap { .. } => None,
            })
            .collect()
    }

    pub fn summary(&self) -> ScheduleSummary {
        ScheduleSummary {
            label: self.label.clone(),
            pulse_count: self.pulse_count(),
            phase_gap_count: self.phase_gap_count(),
            free_count: self.free_count(),
            total_duration_ticks: self.total_duration().get(),
            total_duration: self.total_duration_units(),
            ticks_per_unit: self.timing.base.ticks_per_unit,
        }
    }

    /// Tab-separated table with columns `start_time, kind, axis, duration`
    /// in time units.
    pub fn to_tsv(&self) -> String {
        let base = self.timing.base;
        let mut out = String::from("start_time\tkind\taxis\tduration\n");
        for e in &self.events {
            let axis = e.kind.axis().map_or_else(|| "-".to_string(), |a| a.to_string());
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                base.to_units(e.start),
                e.kind.name(),
                axis,
                base.to_units(e.kind.duration())
            ));
        }
        out
    }

    /// Concatenates `count` copies of this schedule.
    pub fn repeat(&self, count: usize, label: impl Into<String>) -> Schedule {
        let kinds = (0..count).flat_map(|_| self.events.iter().map(|e| e.kind)).collect();
        Schedule::from_kinds(kinds, self.timing, label.into())
    }
}

/// Builds CDD/PDD schedules for a given base pair and size limit.
#[derive(Debug, Clone, Copy)]
pub struct SequenceCompiler {
    pub pair: BasePair,
    pub max_events: usize,
}

impl Default for SequenceCompiler {
    fn default() -> Self {
        Self { pair: BasePair::default(), max_events: DEFAULT_MAX_EVENTS }
    }
}

impl SequenceCompiler {
    pub fn new(pair: BasePair, max_events: usize) -> Self {
        Self { pair, max_events }
    }

    fn check_size(&self, requested: u128) -> Result<()> {
        if requested > self.max_events as u128 {
            return Err(Error::ScheduleTooLarge { requested, limit: self.max_events });
        }
        Ok(())
    }

    /// Raw step count of CDD_n: r(0) = 1, r(n) = 4 r(n-1) + 4.
    fn cdd_raw_len(n: u32) -> u128 {
        (0..n).fold(1u128, |r, _| r.saturating_mul(4).saturating_add(4))
    }

    /// Level-`n` CDD steps before simplification, in execution order.
    pub fn cdd_steps(&self, n: u32) -> Result<Vec<Step>> {
        self.check_size(Self::cdd_raw_len(n))?;
        let mut steps = vec![Step::Free];
        for _ in 0..n {
            let inner = std::mem::take(&mut steps);
            steps.reserve(4 * inner.len() + 4);
            for axis in [self.pair.inner, self.pair.outer, self.pair.inner, self.pair.outer] {
                steps.extend_from_slice(&inner);
                steps.push(Step::Pulse(axis));
            }
        }
        Ok(steps)
    }

    pub fn cdd(&self, n: u32, timing: TimingParams) -> Result<Schedule> {
        timing.validate()?;
        let steps = self.cdd_steps(n)?;
        Ok(self.simplify_labeled(&steps, timing, format!("CDD_{n}")))
    }

    pub fn pdd(&self, k: usize, timing: TimingParams) -> Result<Schedule> {
        timing.validate()?;
        if k == 0 {
            return Err(Error::InvalidConfig("PDD needs at least one cycle".into()));
        }
        self.check_size(8u128.saturating_mul(k as u128))?;
        let cycle = self.cdd_steps(1)?;
        let steps: Vec<Step> = cycle.iter().copied().cycle().take(cycle.len() * k).collect();
        Ok(self.simplify_labeled(&steps, timing, format!("PDD_{k}")))
    }

    /// Applies the back-to-back pulse rules until nothing changes.
    ///
    /// Adjacent same-axis pulses cancel (repeatedly, so `X Z Z X` vanishes);
    /// adjacent different-axis pulses are separated by a phase gap of `fa`.
    /// Free intervals are never merged or removed.
    pub fn simplify(&self, raw: &[Step], timing: TimingParams) -> Schedule {
        self.simplify_labeled(raw, timing, "custom".into())
    }

    fn simplify_labeled(&self, raw: &[Step], timing: TimingParams, label: String) -> Schedule {
        let mut reduced: Vec<Step> = Vec::with_capacity(raw.len());
        for &step in raw {
            match (step, reduced.last()) {
                (Step::Pulse(a), Some(&Step::Pulse(b))) if a == b => {
                    reduced.pop();
                }
                _ => reduced.push(step),
            }
        }

        let mut kinds = Vec::with_capacity(reduced.len() + reduced.len() / 4);
        let mut prev_pulse = None;
        for step in reduced {
            match step {
                Step::Free => {
                    kinds.push(EventKind::Free { duration: timing.tau0 });
                    prev_pulse = None;
                }
                Step::Pulse(axis) => {
                    if prev_pulse.is_some() {
                        kinds.push(EventKind::PhaseGap { duration: timing.fa });
                    }
                    kinds.push(EventKind::Pulse { axis, duration: timing.delta });
                    prev_pulse = Some(axis);
                }
            }
        }
        Schedule::from_kinds(kinds, timing, label)
    }
}

/// Level-`n` CDD schedule with the default (Z, X) pair and size limit.
pub fn cdd_sequence(n: u32, timing: TimingParams) -> Result<Schedule> {
    SequenceCompiler::default().cdd(n, timing)
}

/// `k` repetitions of the CDD₁ cycle with the default pair and size limit.
pub fn pdd_sequence(k: usize, timing: TimingParams) -> Result<Schedule> {
    SequenceCompiler::default().pdd(k, timing)
}

pub fn simplify(raw: &[Step], timing: TimingParams) -> Schedule {
    SequenceCompiler::default().simplify(raw, timing)
}

/// Ordered product of the ideal π rotations in a schedule; free intervals and
/// phase gaps contribute the identity.
pub fn net_pulse_unitary(s: &Schedule) -> Matrix {
    s.events.iter().filter_map(|e| e.kind.axis()).fold(linalg::identity(2), |acc, axis| axis.pi_rotation() * acc)
}

/// Product of rotations for a raw step list, in execution order.
pub fn net_step_unitary(steps: &[Step]) -> Matrix {
    steps
        .iter()
        .filter_map(|s| match s {
            Step::Pulse(a) => Some(*a),
            Step::Free => None,
        })
        .fold(linalg::identity(2), |acc, axis| axis.pi_rotation() * acc)
}

/// True when `a = e^{iφ} b` for some phase φ, within `tol` (Frobenius).
pub fn equal_up_to_phase(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let overlap = (b.adjoint() * a).trace();
    if overlap.norm() < 1e-300 {
        return a.norm() < tol && b.norm() < tol;
    }
    let phase = overlap / overlap.norm();
    (a - b.map(|v| v * phase)).norm() <= tol
}

/// Spectral norm of `Σ_α P_α† H_SB P_α`; zero when the decoupling condition holds.
pub fn check_decoupling_condition(pulses: &[Matrix], h_sb: &Matrix) -> Result<f64> {
    let dim = h_sb.nrows();
    if h_sb.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: h_sb.ncols() });
    }
    let mut acc = Matrix::zeros(dim, dim);
    for p in pulses {
        if p.nrows() != dim || p.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.nrows() });
        }
        acc += p.adjoint() * h_sb * p;
    }
    Ok(linalg::spectral_norm(&acc))
}
