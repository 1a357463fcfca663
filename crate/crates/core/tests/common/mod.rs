// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use cdd_core::dynamics::{DensityMatrix, HamiltonianSpec, Pauli, PauliWord, SpinSystem, Term};
use cdd_core::linalg::{self, HermitianEigen, Matrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
    let g = ginibre(rng, dim, dim);
    (&g + g.adjoint()).scale(0.5)
}

/// Random density matrix of random rank, from a Ginibre factor.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let rank = rng.gen_range(1..=dim);
    let g = ginibre(rng, dim, rank);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(linalg::hermitize(&m.unscale(tr))).unwrap()
}

/// Haar-ish unitary: eigenvectors of a random Hermitian matrix with random phases.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
    let eig = HermitianEigen::new(&random_hermitian(rng, dim));
    eig.map(|v| C64::from_polar(1.0, 3.0 * v))
}

pub fn random_pauli(rng: &mut ChaCha8Rng, allow_identity: bool) -> Pauli {
    let all = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    if allow_identity {
        all[rng.gen_range(0..4)]
    } else {
        all[rng.gen_range(1..4)]
    }
}

/// Random 1-local coupling: each term is one system Pauli times a non-trivial
/// bath word.
pub fn random_one_local(rng: &mut ChaCha8Rng, sys: &SpinSystem, terms: usize) -> HamiltonianSpec {
    let n = sys.n_spins();
    let mut spec = HamiltonianSpec::default();
    for _ in 0..terms {
        let mut word = vec![Pauli::I; n];
        word[rng.gen_range(0..sys.n_system)] = random_pauli(rng, false);
        loop {
            for p in word.iter_mut().skip(sys.n_system) {
                *p = random_pauli(rng, true);
            }
            if word[sys.n_system..].iter().any(|p| *p != Pauli::I) {
                break;
            }
        }
        spec.terms.push(Term::new(rng.sample(StandardNormal), PauliWord(word)));
    }
    spec
}

/// `{I, X^⊗n_s, Y^⊗n_s, Z^⊗n_s}` on the system, identity on the bath.
pub fn collective_pauli_group(sys: &SpinSystem) -> Vec<Matrix> {
    [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z]
        .into_iter()
        .map(|p| {
            let mut word = vec![Pauli::I; sys.n_spins()];
            for w in word.iter_mut().take(sys.n_system) {
                *w = p;
            }
            PauliWord(word).matrix()
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}
