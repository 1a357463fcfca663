// SPDX-License-Identifier: Apache-2.0

mod common;

use cdd_core::dynamics::{reduced_state, DensityMatrix, PulseModel, Simulator};
use cdd_core::harness::{make_bath, BathConfig};
use cdd_core::metrics::trace_distance;
use cdd_core::sequence::{cdd_sequence, TimeBase, TimingParams};
use cdd_core::theory::*;
use nalgebra::{Matrix3, Vector3};
use rand::Rng;

fn brute_force_argmin(j: f64, beta: f64, tau0: f64) -> u32 {
    (0..=12u32).min_by(|&a, &b| cdd_bound(j, beta, tau0, a).total_cmp(&cdd_bound(j, beta, tau0, b))).unwrap()
}

#[test]
fn optimal_level_matches_brute_force() {
    let mut rng = common::rng(20);
    for _ in 0..1000 {
        let beta_tau0 = 10f64.powf(rng.gen_range(-6.0..-1.0));
        let j_tau0 = 10f64.powf(rng.gen_range(-8.0..-1.0));
        let best = brute_force_argmin(j_tau0, beta_tau0, 1.0);
        let opt = optimal_level(beta_tau0, 1.0);
        assert!(best.abs_diff(opt) <= 1, "βτ₀={beta_tau0}: brute {best}, formula {opt}");
    }
}

#[test]
fn continuous_minimizer_is_exact() {
    for beta_tau0 in [1e-5, 3e-4, 1e-2, 0.05] {
        // golden-section search on ln(bound) over real n
        let f = |n: f64| cdd_bound_real(1e-3, beta_tau0, 1.0, n).ln();
        let (mut a, mut b) = (0.0, 12.0);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        while b - a > 1e-9 {
            let (c, d) = (b - g * (b - a), a + g * (b - a));
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        let expect = optimal_level_continuous(beta_tau0, 1.0);
        assert!((0.5 * (a + b) - expect).abs() <= 1e-6);
    }
}

#[test]
fn required_level_round_trip() {
    let mut rng = common::rng(21);
    let mut checked = 0;
    while checked < 100 {
        let beta_tau0 = 10f64.powf(rng.gen_range(-6.0..-1.5));
        let j_tau0 = beta_tau0 * 10f64.powf(rng.gen_range(-2.0..0.0));
        let n_true = rng.gen_range(0.0..optimal_level_continuous(beta_tau0, 1.0).max(0.0));
        let target = cdd_bound_real(j_tau0, beta_tau0, 1.0, n_true);
        let Ok(n) = required_level_continuous(j_tau0, beta_tau0, 1.0, target) else { continue };
        let back = cdd_bound_real(j_tau0, beta_tau0, 1.0, n);
        assert!((back - target).abs() / target <= 1e-9, "{back} vs {target}");
        checked += 1;
    }
}

#[test]
fn required_level_at_zero_level_bound() {
    let (j, b) = (0.002, 0.01);
    assert_eq!(required_level(j, b, 1.0, cdd_bound(j, b, 1.0, 0)).unwrap(), 0);
}

#[test]
fn epsilon_threshold_equivalence() {
    let mut rng = common::rng(22);
    for _ in 0..1000 {
        let beta = 10f64.powf(rng.gen_range(-3.0..3.0));
        let n = rng.gen_range(0..8);
        let critical = 1.0 / (2f64.powi(n as i32 + 2) * beta);
        let tau0 = critical * rng.gen_range(0.01..2.0);
        if ((tau0 - critical) / critical).abs() < 1e-12 {
            continue;
        }
        assert_eq!(epsilon(beta, tau0, n) < 1.0, tau0 < critical);
    }
}

#[test]
fn bound_is_unimodal_below_threshold() {
    let mut rng = common::rng(23);
    for _ in 0..200 {
        let beta_tau0 = 10f64.powf(rng.gen_range(-6.0..-2.0));
        // largest level with ε < 1
        let n_max = (0..20).take_while(|&n| epsilon(beta_tau0, 1.0, n) < 1.0).last().unwrap();
        let n_opt = optimal_level_continuous(beta_tau0, 1.0);
        let b: Vec<f64> = (0..=n_max).map(|n| cdd_bound(1e-4, beta_tau0, 1.0, n)).collect();
        for n in 1..=n_max as usize {
            if (n as f64) <= n_opt {
                assert!(b[n] < b[n - 1]);
            } else if (n as f64 - 1.0) >= n_opt {
                assert!(b[n] > b[n - 1]);
            }
        }
    }
}

#[test]
fn optimal_bound_is_quadratic_in_log_beta_tau0() {
    // ln(bound at n_opt) against x = log₄(βτ₀): quadratic least squares, R²
    let xs: Vec<f64> = (0..60).map(|k| -10.0 + 9.0 * k as f64 / 59.0).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let bt = 4f64.powf(x);
            cdd_bound(1e-3, bt, 1.0, optimal_level(bt, 1.0)).ln()
        })
        .collect();
    let mut ata = Matrix3::<f64>::zeros();
    let mut aty = Vector3::<f64>::zeros();
    for (&x, &y) in xs.iter().zip(&ys) {
        let row = Vector3::new(1.0, x, x * x);
        ata += row * row.transpose();
        aty += row * y;
    }
    let coef = ata.lu().solve(&aty).unwrap();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for (&x, &y) in xs.iter().zip(&ys) {
        let fit = coef[0] + coef[1] * x + coef[2] * x * x;
        ss_res += (y - fit).powi(2);
        ss_tot += (y - mean).powi(2);
    }
    let r2 = 1.0 - ss_res / ss_tot;
    assert!(r2 >= 0.99, "R² = {r2}");
    assert!(coef[2] < 0.0);
}

#[test]
fn cdd_beats_pdd_bound_at_equal_time() {
    for beta_tau0 in [1e-4, 1e-3, 1e-2, 0.03] {
        // ratio is (βτ₀)^(n−1)·2^(n²): a factor 2 against CDD at n = 1, below
        // one for every n ≥ 2 once ε < 1
        for n in 1..=6u32 {
            let c = cdd_bound(1e-4, beta_tau0, 1.0, n);
            let p = pdd_bound(1e-4, beta_tau0, 1.0, 4u64.pow(n));
            let ratio = beta_tau0.powi(n as i32 - 1) * 2f64.powi((n * n) as i32);
            assert!((c / p - ratio).abs() <= 1e-12 * ratio);
            if n >= 2 && epsilon(beta_tau0, 1.0, n) < 1.0 {
                assert!(c < p, "βτ₀={beta_tau0} n={n}: {c} vs {p}");
            }
        }
    }
}

#[test]
fn bath_strengths_match_dense_norms() {
    let mut rng = common::rng(24);
    for seed in 0..10 {
        let j = rng.gen_range(0.01..2.0);
        let beta = rng.gen_range(0.01..2.0);
        let bath = make_bath(&BathConfig { seed, n_bath: 3, j, beta, ..Default::default() }).unwrap();
        let (mj, mb) = hamiltonian_strengths(&bath.spec, &bath.system).unwrap();
        assert!((mj - j).abs() <= 1e-10 && (mb - beta).abs() <= 1e-10);
    }
}

/// Simulated distance after CDD_n, for n ≤ 2, stays within twice the bound.
#[test]
fn bound_covers_simulation_within_factor_two() {
    let mut rng = common::rng(25);
    let base = TimeBase::new(1_000_000_000_000).unwrap();
    let mut worst: f64 = 0.0;
    for seed in 0..50u64 {
        let beta_tau0 = 10f64.powf(rng.gen_range(-3.0..-2.0));
        // pessimistic regime, jτ₀ ≤ 10⁻³
        let j_tau0 = (beta_tau0 * 10f64.powf(rng.gen_range(-2.0..-0.1))).min(1e-3);
        let tau0 = 1.0;
        let bath =
            make_bath(&BathConfig { seed, n_bath: 2, j: j_tau0 / tau0, beta: beta_tau0 / tau0, ..Default::default() })
                .unwrap();
        let mut sim = Simulator::new(&bath.spec, bath.system, PulseModel::ideal()).unwrap();
        let mut reference =
            Simulator::new(&bath.spec.without_coupling(&bath.system), bath.system, PulseModel::ideal()).unwrap();
        let rho0 = DensityMatrix::plus(1).tensor(&DensityMatrix::maximally_mixed(4));
        for n in 0..=2 {
            let s = cdd_sequence(n, TimingParams::from_units(tau0, 0.0, 0.0, base).unwrap()).unwrap();
            let a = reduced_state(&sim.run(&s, &rho0).unwrap(), &bath.system).unwrap();
            let b = reduced_state(&reference.run(&s, &rho0).unwrap(), &bath.system).unwrap();
            let ratio = trace_distance(&a, &b).unwrap() / cdd_bound(j_tau0, beta_tau0, tau0, n);
            worst = worst.max(ratio);
            assert!(ratio <= 2.0, "seed {seed} n={n}: distance/bound = {ratio}");
        }
    }
    eprintln!("largest distance/bound ratio: {worst:.3}");
}
