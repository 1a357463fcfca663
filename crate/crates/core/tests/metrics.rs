// SPDX-License-Identifier: Apache-2.0

mod common;

use cdd_core::dynamics::DensityMatrix;
use cdd_core::linalg::{Matrix, C64};
use cdd_core::metrics::*;
use rand::Rng;
use rand_distr::StandardNormal;

const TOL: f64 = 1e-10;

fn qubit(x: f64, y: f64, z: f64) -> DensityMatrix {
    let m = Matrix::from_row_slice(
        2,
        2,
        &[C64::new(1.0 + z, 0.0), C64::new(x, -y), C64::new(x, y), C64::new(1.0 - z, 0.0)],
    );
    DensityMatrix::new(m.scale(0.5)).unwrap()
}

#[test]
fn distance_and_fidelity_examples() {
    let (zero, one, plus) = (qubit(0.0, 0.0, 1.0), qubit(0.0, 0.0, -1.0), qubit(1.0, 0.0, 0.0));
    assert!(trace_distance(&zero, &zero).unwrap().abs() < 1e-15);
    assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
    assert!((trace_distance(&zero, &plus).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    assert!((fidelity(&plus, &plus).unwrap() - 1.0).abs() < 1e-7);
    let mixed = DensityMatrix::maximally_mixed(2);
    assert!((fidelity(&zero, &mixed).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    assert!((magnetization(&qubit(0.3, 0.4, 0.0)).unwrap() - 0.5).abs() < 1e-15);
    assert!(magnetization(&zero).unwrap().abs() < 1e-15);
    assert!(trace_distance(&zero, &DensityMatrix::maximally_mixed(4)).is_err());
}

#[test]
fn trace_distance_is_a_metric() {
    let mut rng = common::rng(10);
    for case in 0..500 {
        let dim = 2 << (case % 3);
        let (a, b, c) = (
            common::random_density(&mut rng, dim),
            common::random_density(&mut rng, dim),
            common::random_density(&mut rng, dim),
        );
        let ab = trace_distance(&a, &b).unwrap();
        let ba = trace_distance(&b, &a).unwrap();
        let ac = trace_distance(&a, &c).unwrap();
        let cb = trace_distance(&c, &b).unwrap();
        assert!((ab - ba).abs() <= TOL);
        assert!(ab <= ac + cb + TOL);
        assert!((-TOL..=1.0 + TOL).contains(&ab));
        assert!(trace_distance(&a, &a).unwrap() <= TOL);
    }
}

#[test]
fn fuchs_van_de_graaf() {
    let mut rng = common::rng(11);
    for case in 0..1000 {
        let dim = 2 << (case % 3);
        let a = common::random_density(&mut rng, dim);
        let b = common::random_density(&mut rng, dim);
        let d = trace_distance(&a, &b).unwrap();
        let f = fidelity(&a, &b).unwrap();
        assert!(1.0 - d <= f + TOL, "case {case}: D={d} F={f}");
        assert!(f <= (1.0 - d * d).sqrt() + TOL, "case {case}: D={d} F={f}");
    }
}

#[test]
fn pure_state_fidelity_reduces_to_overlap() {
    let mut rng = common::rng(12);
    for _ in 0..50 {
        let psi = common::ginibre(&mut rng, 4, 1);
        let psi = psi.unscale(psi.norm());
        let rho = DensityMatrix::from_pure(&psi.column(0).into_owned()).unwrap();
        let sigma = common::random_density(&mut rng, 4);
        let overlap = (psi.adjoint() * sigma.matrix() * &psi)[(0, 0)].re;
        assert!((fidelity(&rho, &sigma).unwrap() - overlap.sqrt()).abs() <= 1e-7);
    }
}

#[test]
fn unitary_invariance() {
    let mut rng = common::rng(13);
    for _ in 0..100 {
        let a = common::random_density(&mut rng, 8);
        let b = common::random_density(&mut rng, 8);
        let u = common::random_unitary(&mut rng, 8);
        let d0 = trace_distance(&a, &b).unwrap();
        let d1 = trace_distance(&a.conjugate(&u), &b.conjugate(&u)).unwrap();
        assert!((d0 - d1).abs() <= TOL);
    }
}

#[test]
fn noiseless_fit_over_four_decades() {
    for k in 0..=16 {
        let t2 = 10f64.powf(k as f64 / 4.0);
        let curve = DecayCurve::from_pairs((0..=20).map(|i| {
            let t = 0.15 * t2 * i as f64;
            (t, 1.3 * (-t / t2).exp())
        }))
        .unwrap();
        let f = fit_exponential(&curve).unwrap();
        assert!((f.t2 - t2).abs() / t2 <= 1e-6, "T2={t2}: {}", f.t2);
        assert!((f.s0 - 1.3).abs() / 1.3 <= 1e-6);
        assert!((f.rate * f.t2 - 1.0).abs() <= 1e-15);
    }
    // one fixed grid across the same four decades
    for t2 in [3.0, 30.0, 300.0, 3000.0, 30000.0] {
        let curve = DecayCurve::from_pairs((0..=20).map(|i| (5.0 * i as f64, (-5.0 * i as f64 / t2).exp()))).unwrap();
        let f = fit_exponential(&curve).unwrap();
        assert!((f.t2 - t2).abs() / t2 <= 1e-6, "T2={t2}: {}", f.t2);
    }
}

#[test]
fn noisy_fit_median_error() {
    let t2 = 40.0;
    let mut errors: Vec<f64> = (0..100)
        .map(|seed| {
            let mut rng = common::rng(1000 + seed);
            let curve = DecayCurve::from_pairs((0..20).map(|i| {
                let t = 6.0 * i as f64;
                let noise: f64 = rng.sample(StandardNormal);
                (t, 2.0 * (-t / t2).exp() * (1.0 + 0.01 * noise))
            }))
            .unwrap();
            (fit_exponential(&curve).unwrap().t2 - t2).abs() / t2
        })
        .collect();
    errors.sort_by(f64::total_cmp);
    let median = 0.5 * (errors[49] + errors[50]);
    assert!(median <= 0.05, "median relative error {median}");
}

#[test]
fn flat_curve_reports_no_decay() {
    let c = DecayCurve::from_pairs((0..10).map(|i| (i as f64, 1.0))).unwrap();
    let f = fit_exponential(&c).unwrap();
    assert!(f.is_zero_decay() && f.t2.is_infinite());
}
