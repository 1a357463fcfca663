// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised across schedule compilation, simulation, fitting and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid timing parameters: {0}")]
    InvalidTiming(String),

    #[error("base pair must use two different axes, got {0:?} twice")]
    DegenerateBasePair(crate::sequence::PulseAxis),

    #[error("schedule would need {requested} events, above the limit of {limit}")]
    ScheduleTooLarge { requested: u128, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("pauli word has {found} sites, system has {expected} spins")]
    WordLength { expected: usize, found: usize },

    #[error("invalid pauli word {0:?}")]
    InvalidPauliWord(String),

    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("eigenphase {phase} is within the branch-cut margin of ±π; reduce tau0")]
    BranchCut { phase: f64 },

    #[error("invalid pulse model: {0}")]
    InvalidPulseModel(String),

    #[error("not enough data to fit: {0}")]
    InsufficientData(String),

    #[error("exponential fit did not converge after {iterations} iterations")]
    FitDidNotConverge { iterations: usize },

    #[error("target distance unreachable (discriminant {discriminant})")]
    TargetUnreachable { discriminant: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{label} at tau0={tau0}: {source}")]
    Simulation {
        label: String,
        tau0: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Short machine-readable tag for error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidTiming(_) => "invalid_timing",
            Error::DegenerateBasePair(_) => "degenerate_base_pair",
            Error::ScheduleTooLarge { .. } => "schedule_too_large",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::WordLength { .. } => "word_length",
            Error::InvalidPauliWord(_) => "invalid_pauli_word",
            Error::NotHermitian(_) => "not_hermitian",
            Error::InvalidState(_) => "invalid_state",
            Error::BranchCut { .. } => "branch_cut",
            Error::InvalidPulseModel(_) => "invalid_pulse_model",
            Error::InsufficientData(_) => "insufficient_data",
            Error::FitDidNotConverge { .. } => "fit_did_not_converge",
            Error::TargetUnreachable { .. } => "target_unreachable",
            Error::InvalidConfig(_) => "invalid_config",
            Error::Simulation { .. } => "simulation",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
