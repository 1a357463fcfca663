// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Operator, SpinSystem};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> Matrix {
        match self {
            Pauli::I => linalg::identity(2),
            Pauli::X => linalg::sigma_x(),
            Pauli::Y => linalg::sigma_y(),
            Pauli::Z => linalg::sigma_z(),
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl From<crate::sequence::PulseAxis> for Pauli {
    fn from(axis: crate::sequence::PulseAxis) -> Self {
        match axis {
            crate::sequence::PulseAxis::X => Pauli::X,
            crate::sequence::PulseAxis::Y => Pauli::Y,
            crate::sequence::PulseAxis::Z => Pauli::Z,
        }
    }
}

/// One Pauli (or identity) per spin, written as a string such as `"ZIXI"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliWord(pub Vec<Pauli>);

impl PauliWord {
    pub fn identity(n: usize) -> Self {
        Self(vec![Pauli::I; n])
    }

    /// Identity everywhere except the listed `(site, pauli)` pairs.
    pub fn with_sites(n: usize, sites: &[(usize, Pauli)]) -> Self {
        let mut w = Self::identity(n);
        for &(site, p) in sites {
            w.0[site] = p;
        }
        w
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn matrix(&self) -> Matrix {
        let factors: Vec<Matrix> = self.0.iter().map(|p| p.matrix()).collect();
        linalg::kron_all(&factors)
    }

    fn acts_on(&self, range: std::ops::Range<usize>) -> bool {
        self.0[range].iter().any(|&p| p != Pauli::I)
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.letter()))
    }
}

impl FromStr for PauliWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(Error::InvalidPauliWord(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliWord)
    }
}

impl Serialize for PauliWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which part of `H = H_S + H_B + H_SB` a term belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Partition {
    System,
    Bath,
    Coupling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: f64,
    pub word: PauliWord,
}

impl Term {
    pub fn new(coefficient: f64, word: PauliWord) -> Self {
        Self { coefficient, word }
    }

    /// Identity-only words count as system terms.
    pub fn partition(&self, sys: &SpinSystem) -> Partition {
        let on_system = self.word.acts_on(0..sys.n_system);
        let on_bath = self.word.acts_on(sys.n_system..sys.n_spins());
        match (on_system, on_bath) {
            (true, true) => Partition::Coupling,
            (false, true) => Partition::Bath,
            _ => Partition::System,
        }
    }
}

/// Weighted sum of Pauli words over system and bath spins.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub terms: Vec<Term>,
}

impl HamiltonianSpec {
    pub fn new(terms: Vec<Term>) -> Self {
        Self { terms }
    }

    pub fn push(&mut self, coefficient: f64, word: PauliWord) {
        self.terms.push(Term::new(coefficient, word));
    }

    pub fn part(&self, partition: Partition, sys: &SpinSystem) -> HamiltonianSpec {
        HamiltonianSpec { terms: self.terms.iter().filter(|t| t.partition(sys) == partition).cloned().collect() }
    }

    /// Drops the coupling terms, leaving the error-free reference dynamics.
    pub fn without_coupling(&self, sys: &SpinSystem) -> HamiltonianSpec {
        HamiltonianSpec {
            terms: self.terms.iter().filter(|t| t.partition(sys) != Partition::Coupling).cloned().collect(),
        }
    }

    /// Multiplies every term of one partition by `factor`.
    pub fn scale_part(&mut self, partition: Partition, sys: &SpinSystem, factor: f64) {
        for t in self.terms.iter_mut().filter(|t| t.partition(sys) == partition) {
            t.coefficient *= factor;
        }
    }

    /// Every coupling term touches exactly one system spin.
    pub fn is_one_local(&self, sys: &SpinSystem) -> bool {
        self.terms
            .iter()
            .filter(|t| t.partition(sys) == Partition::Coupling)
            .all(|t| t.word.0[..sys.n_system].iter().filter(|&&p| p != Pauli::I).count() == 1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidConfig(e.to_string()))
    }
}

/// `Σ c · (⊗ σ)` over all terms.
pub fn build_operator(spec: &HamiltonianSpec, sys: &SpinSystem) -> Result<Operator> {
    let n = sys.n_spins();
    let dim = sys.dim();
    let mut m = Matrix::zeros(dim, dim);
    for t in &spec.terms {
        if t.word.len() != n {
            return Err(Error::WordLength { expected: n, found: t.word.len() });
        }
        m += t.word.matrix().scale(t.coefficient);
    }
    Operator::hermitian(m)
}

/// Split of a joint Hermitian operator into `h_S ⊗ I + I ⊗ h_B + h_SB`,
/// where `h_SB` has vanishing partial trace over either factor and `h_B` is
/// traceless (the identity component is kept in `h_S`).
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub system: Matrix,
    pub bath: Matrix,
    pub coupling: Matrix,
}

impl Decomposition {
    /// Spectral norm of the coupling part.
    pub fn coupling_norm(&self) -> f64 {
        linalg::hermitian_spectral_norm(&self.coupling)
    }

    pub fn reconstruct(&self) -> Matrix {
        let ds = self.system.nrows();
        let db = self.bath.nrows();
        self.system.kronecker(&linalg::identity(db)) + linalg::identity(ds).kronecker(&self.bath) + &self.coupling
    }
}

pub fn decompose_hamiltonian(h: &Matrix, sys: &SpinSystem) -> Result<Decomposition> {
    let (ds, db) = (sys.dim_system(), sys.dim_bath());
    if h.nrows() != sys.dim() || h.ncols() != sys.dim() {
        return Err(Error::DimensionMismatch { expected: sys.dim(), found: h.nrows() });
    }
    let defect = linalg::hermiticity_defect(h);
    if defect > 1e-10 * h.norm().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let mean = h.trace() / (ds * db) as f64;
    let system = linalg::partial_trace_b(h, ds, db).unscale(db as f64);
    let bath = linalg::partial_trace_a(h, ds, db).unscale(ds as f64) - linalg::identity(db) * mean;
    let coupling = h - system.kronecker(&linalg::identity(db)) - linalg::identity(ds).kronecker(&bath);
    Ok(Decomposition {
        system: linalg::hermitize(&system),
        bath: linalg::hermitize(&bath),
        coupling: linalg::hermitize(&coupling),
    })
}
