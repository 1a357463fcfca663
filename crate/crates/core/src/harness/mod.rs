// SPDX-License-Identifier: Apache-2.0

//! Experiment driver: synthetic baths, configuration, seeded runs over
//! sequences and τ₀ grids, rate fitting and CSV output.

mod bath;
mod config;
mod experiment;
mod output;

pub use bath::{make_bath, Bath, BathConfig};
pub use config::{BathState, ExperimentConfig, InitialState, SequenceSet, SweepConfig, SystemState, TimingConfig};
pub use experiment::{
    run_experiment, sweep_tau0, CurvePoint, ExperimentResult, RateRow, RateTable, SeedPoint, SequenceCurve, SweepResult,
};
pub use output::{curves_csv, rates_csv, CURVE_COLUMNS, RATE_COLUMNS};
