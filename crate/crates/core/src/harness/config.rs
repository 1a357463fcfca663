// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::BathConfig;
use crate::dynamics::{PulseMode, PulseModel};
use crate::error::{Error, Result};
use crate::sequence::{BasePair, SequenceCompiler, TimeBase, TimingParams, DEFAULT_MAX_EVENTS};

/// Pulse timing in time units, converted to ticks on use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TimingConfig {
    pub tau0: f64,
    pub delta: f64,
    pub fa: f64,
    /// Ticks per time unit; 1000 means a 1 ns tick with microsecond units.
    pub ticks_per_unit: u64,
}

impl Default for TimingConfig {
    fn default() -> Self {
        Self { tau0: 0.02, delta: 0.0, fa: 0.0, ticks_per_unit: 1_000_000_000 }
    }
}

impl TimingConfig {
    pub fn params(&self, tau0: f64) -> Result<TimingParams> {
        TimingParams::from_units(tau0, self.delta, self.fa, TimeBase::new(self.ticks_per_unit)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemState {
    /// `(|0⟩ + |1⟩)/√2` on every system qubit.
    #[default]
    Plus,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BathState {
    /// High-temperature limit `I/d_B`.
    #[default]
    MaximallyMixed,
    /// Gaussian random pure state drawn from the bath seed.
    RandomPure,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct InitialState {
    pub system: SystemState,
    pub bath: BathState,
}

/// Which sequences `run_experiment` records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SequenceSet {
    /// Unprotected evolution, sampled at the CDD total times.
    pub free: bool,
    /// CDD levels; each level is one time point.
    pub cdd_levels: Vec<u32>,
    /// PDD cycle counts. Empty means `4^(n-1)` for every CDD level `n ≥ 1`,
    /// which matches the CDD total times.
    pub pdd_cycles: Vec<usize>,
    pub pdd: bool,
}

impl Default for SequenceSet {
    fn default() -> Self {
        Self { free: true, cdd_levels: vec![0, 1, 2, 3], pdd_cycles: Vec::new(), pdd: true }
    }
}

impl SequenceSet {
    pub fn pdd_cycle_counts(&self) -> Vec<usize> {
        if !self.pdd_cycles.is_empty() {
            return self.pdd_cycles.clone();
        }
        self.cdd_levels.iter().filter(|&&n| n >= 1).map(|&n| 4usize.pow(n - 1)).collect()
    }
}

/// Settings for the τ₀ sweep that produces decoherence rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    /// CDD levels whose cycle is repeated to form a decay curve.
    pub cdd_levels: Vec<u32>,
    /// Repetitions per curve (time points per fit).
    pub cycles: usize,
    /// When set, add a PDD curve whose points match the total times of this
    /// CDD level (`4^(level-1)` PDD cycles per point). Written as `0` when
    /// unset, since TOML has no null.
    #[serde(serialize_with = "ser_level", deserialize_with = "de_level")]
    pub pdd_match_level: Option<u32>,
    /// Add a free-evolution curve on the same time grid as `pdd_match_level`
    /// (or the highest CDD level).
    pub free: bool,
}

fn ser_level<S: Serializer>(level: &Option<u32>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u32(level.unwrap_or(0))
}

fn de_level<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<u32>, D::Error> {
    Ok(Option::<u32>::deserialize(d)?.filter(|&n| n > 0))
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { cdd_levels: vec![1, 2, 3], cycles: 10, pdd_match_level: Some(3), free: false }
    }
}

/// Everything needed to reproduce one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub bath: BathConfig,
    /// Number of bath instances averaged; instance `i` uses seed `bath.seed + i`.
    pub seeds: usize,
    pub timing: TimingConfig,
    /// τ₀ values to run; empty means just `timing.tau0`.
    pub tau0_grid: Vec<f64>,
    pub pulse_model: PulseModel,
    /// Base pair as written, e.g. `"ZX"`.
    pub base_pair: String,
    pub max_events: usize,
    pub sequences: SequenceSet,
    pub sweep: SweepConfig,
    pub initial: InitialState,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            bath: BathConfig::default(),
            seeds: 10,
            timing: TimingConfig::default(),
            tau0_grid: Vec::new(),
            pulse_model: PulseModel::ideal(),
            base_pair: "ZX".into(),
            max_events: DEFAULT_MAX_EVENTS,
            sequences: SequenceSet::default(),
            sweep: SweepConfig::default(),
            initial: InitialState::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn tau0_values(&self) -> Vec<f64> {
        if self.tau0_grid.is_empty() {
            vec![self.timing.tau0]
        } else {
            self.tau0_grid.clone()
        }
    }

    pub fn compiler(&self) -> Result<SequenceCompiler> {
        Ok(SequenceCompiler::new(self.base_pair.parse::<BasePair>()?, self.max_events))
    }

    pub fn seed_list(&self) -> Vec<u64> {
        (0..self.seeds as u64).map(|i| self.bath.seed.wrapping_add(i)).collect()
    }

    /// Checks the parts that do not need a simulation.
    pub fn validate(&self) -> Result<()> {
        if self.seeds == 0 {
            return Err(Error::InvalidConfig("seeds must be at least 1".into()));
        }
        self.compiler()?;
        for tau0 in self.tau0_values() {
            self.timing.params(tau0)?;
        }
        if self.pulse_model.mode == PulseMode::Ideal && self.timing.delta > 0.0 {
            return Err(Error::InvalidConfig(
                "ideal pulse model requires delta = 0; use finite_width for wide pulses".into(),
            ));
        }
        Ok(())
    }
}
