// SPDX-License-Identifier: Apache-2.0

//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use cdd_core::dynamics::*;
use cdd_core::harness::*;
use cdd_core::metrics::*;
use cdd_core::sequence::*;
use cdd_core::theory::*;
use rand::Rng;
use rand_distr::StandardNormal;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timing_exactness() -> Outcome {
    let t = TimingParams::from_units(15.0, 10.52, 0.376, TimeBase::default()).unwrap();
    let expect = [(1, 102_080u64), (2, 409_072), (3, 1_678_368)];
    let got: Vec<u64> = expect.iter().map(|&(n, _)| cdd_sequence(n, t).unwrap().total_duration().get()).collect();
    let pass = got.iter().zip(&expect).all(|(g, (_, e))| g == e);
    check(pass, format!("cycle ticks {got:?} (1 tick = 1 ns)"))
}

fn decoupling_identity() -> Outcome {
    let mut rng = common::rng(2024);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let sys = SpinSystem::new(1, 1 + case % 4).unwrap();
        let spec = common::random_one_local(&mut rng, &sys, 8);
        let h = build_operator(&spec, &sys).unwrap().into_matrix();
        let r = check_decoupling_condition(&common::collective_pauli_group(&sys), &h).unwrap();
        worst = worst.max(r);
    }
    check(worst <= 1e-12, format!("max residual {worst:.1e} over 100 couplings"))
}

fn suppression_scaling() -> Outcome {
    let base = TimeBase::new(1_000_000_000_000).unwrap();
    let taus = common::geomspace(1e-4, 1e-2, 7);
    let mut lines = Vec::new();
    let mut pass = true;
    for seed in 0..3 {
        let bath = make_bath(&BathConfig { n_bath: 2, seed, beta: 1.0, j: 0.5, ..Default::default() }).unwrap();
        let mut sim = Simulator::new(&bath.spec, bath.system, PulseModel::ideal()).unwrap();
        let mut norms = |f: &dyn Fn(TimingParams) -> Schedule| -> Vec<f64> {
            taus.iter()
                .map(|&tau| {
                    let t = TimingParams::from_units(tau, 0.0, 0.0, base).unwrap();
                    sim.effective_coupling_norm(&f(t)).unwrap()
                })
                .collect()
        };
        let free = norms(&|t| simplify(&[Step::Free], t));
        let c1 = norms(&|t| cdd_sequence(1, t).unwrap());
        let c2 = norms(&|t| cdd_sequence(2, t).unwrap());
        let (sf, s1, s2) =
            (common::loglog_slope(&taus, &free), common::loglog_slope(&taus, &c1), common::loglog_slope(&taus, &c2));
        pass &= sf <= 0.1 && s1 >= 0.9 && s2 > s1;
        lines.push(format!("seed {seed}: free {sf:.3}, CDD1 {s1:.3}, CDD2 {s2:.3}"));
    }
    check(pass, format!("slopes {}", lines.join("; ")))
}

fn cdd_beats_pdd() -> Outcome {
    let cfg = ExperimentConfig {
        bath: BathConfig { n_bath: 4, beta: 1.0, j: 0.1, ..Default::default() },
        seeds: 20,
        timing: TimingConfig { tau0: 0.02, delta: 0.0, fa: 0.0, ticks_per_unit: 1_000_000_000 },
        ..Default::default()
    };
    let eps3 = epsilon(cfg.bath.beta, cfg.timing.tau0, 3);
    let r = run_experiment(&cfg).unwrap();
    let curve = |l: &str| r.curves.iter().find(|c| c.label == l).unwrap();
    let (free, pdd, cdd) = (curve("free"), curve("PDD"), curve("CDD"));
    let mut pass = eps3 < 1.0;
    let mut detail = vec![format!("ε(3)={eps3:.2}")];
    for n in [2usize, 3] {
        let c = &cdd.points[n];
        let p = pdd.points.iter().find(|p| p.total_time_ticks == c.total_time_ticks).unwrap();
        let wins = c.per_seed.iter().zip(&p.per_seed).filter(|(a, b)| a.distance <= b.distance).count();
        pass &= wins * 10 >= 9 * c.per_seed.len();
        detail.push(format!("n={n}: CDD≤PDD distance in {wins}/{} seeds", c.per_seed.len()));
    }
    const TOL: f64 = 1e-12;
    for c in &cdd.points[1..] {
        let p = pdd.points.iter().find(|p| p.total_time_ticks == c.total_time_ticks).unwrap();
        let f = free.points.iter().find(|p| p.total_time_ticks == c.total_time_ticks).unwrap();
        pass &= c.signal + TOL >= p.signal && p.signal + TOL >= f.signal;
        detail.push(format!("{}: signals {:.6}/{:.6}/{:.6}", c.schedule, c.signal, p.signal, f.signal));
    }
    check(pass, detail.join(", "))
}

/// Violations of "non-decreasing" in a sequence.
fn violations(xs: &[f64]) -> usize {
    xs.windows(2).filter(|w| w[1] < w[0]).count()
}

fn finite_width_trend() -> Outcome {
    // experimental pulse width and phase delay (µs); bath strengths chosen so
    // βδ = 0.05 and β/J = 10
    let delta = 10.52;
    let beta = 0.05 / delta;
    let cfg = ExperimentConfig {
        bath: BathConfig { n_bath: 4, beta, j: beta / 10.0, ..Default::default() },
        seeds: 10,
        timing: TimingConfig { tau0: 15.0, delta, fa: 0.376, ticks_per_unit: 1000 },
        tau0_grid: common::geomspace(15.0, 150.0, 7),
        pulse_model: PulseModel::finite_width(true),
        sweep: SweepConfig { cdd_levels: vec![3], cycles: 10, pdd_match_level: Some(3), free: false },
        ..Default::default()
    };
    let table = sweep_tau0(&cfg).unwrap().table;
    let series = |l: &str| -> Option<Vec<f64>> { table.series(l).into_iter().map(|(_, r)| r).collect() };
    let (Some(cdd3), Some(pdd)) = (series("CDD_3"), series("PDD")) else {
        return check(false, "a fit failed");
    };
    // grid is ascending in τ₀: CDD₃ should rise with τ₀, PDD should fall
    let v_cdd = violations(&cdd3);
    let neg: Vec<f64> = pdd.iter().map(|r| -r).collect();
    let v_pdd = violations(&neg);
    let pdd_peak_at_smallest = pdd.iter().all(|&r| r <= pdd[0]);
    let fmt = |v: &[f64]| v.iter().map(|r| format!("{r:.2e}")).collect::<Vec<_>>().join(" ");
    check(
        v_cdd <= 1 && v_pdd <= 1 && pdd_peak_at_smallest,
        format!(
            "τ₀/δ 1.43→14.3; CDD3 rates [{}] ({v_cdd} violations); PDD rates [{}] ({v_pdd} violations)",
            fmt(&cdd3),
            fmt(&pdd)
        ),
    )
}

fn theory_consistency() -> Outcome {
    let mut rng = common::rng(6);
    let mut off = 0;
    for _ in 0..1000 {
        let bt = 10f64.powf(rng.gen_range(-6.0..-1.0));
        let jt = 10f64.powf(rng.gen_range(-8.0..-1.0));
        let brute =
            (0..=12u32).min_by(|&a, &b| cdd_bound(jt, bt, 1.0, a).total_cmp(&cdd_bound(jt, bt, 1.0, b))).unwrap();
        if brute.abs_diff(optimal_level(bt, 1.0)) > 1 {
            off += 1;
        }
    }
    let mut worst_rt: f64 = 0.0;
    let mut done = 0;
    while done < 100 {
        let bt = 10f64.powf(rng.gen_range(-6.0..-1.5));
        let jt = bt * 10f64.powf(rng.gen_range(-2.0..0.0));
        let n = rng.gen_range(0.0..optimal_level_continuous(bt, 1.0).max(0.0));
        let target = cdd_bound_real(jt, bt, 1.0, n);
        if let Ok(back) = required_level_continuous(jt, bt, 1.0, target) {
            worst_rt = worst_rt.max((cdd_bound_real(jt, bt, 1.0, back) - target).abs() / target);
            done += 1;
        }
    }
    let mut eps_bad = 0;
    for _ in 0..1000 {
        let beta = 10f64.powf(rng.gen_range(-3.0..3.0));
        let n = rng.gen_range(0..8);
        let critical = 1.0 / (2f64.powi(n as i32 + 2) * beta);
        let tau0 = critical * rng.gen_range(0.01..2.0);
        if (epsilon(beta, tau0, n) < 1.0) != (tau0 < critical) && ((tau0 - critical) / critical).abs() > 1e-12 {
            eps_bad += 1;
        }
    }
    check(
        off == 0 && worst_rt <= 1e-9 && eps_bad == 0,
        format!(
            "optimal-level misses {off}/1000, round-trip error {worst_rt:.1e}, ε-threshold mismatches {eps_bad}/1000"
        ),
    )
}

fn metrics_suite() -> Outcome {
    let mut rng = common::rng(7);
    let tol = 1e-10;
    let mut bad = 0;
    for case in 0..1000 {
        let dim = 2 << (case % 3);
        let a = common::random_density(&mut rng, dim);
        let b = common::random_density(&mut rng, dim);
        let c = common::random_density(&mut rng, dim);
        let ab = trace_distance(&a, &b).unwrap();
        let ok_metric = (ab - trace_distance(&b, &a).unwrap()).abs() <= tol
            && ab <= trace_distance(&a, &c).unwrap() + trace_distance(&c, &b).unwrap() + tol
            && trace_distance(&a, &a).unwrap() <= tol;
        let f = fidelity(&a, &b).unwrap();
        let ok_fvdg = 1.0 - ab <= f + tol && f <= (1.0 - ab * ab).sqrt() + tol;
        if !(ok_metric && ok_fvdg) {
            bad += 1;
        }
    }
    let mut worst_clean: f64 = 0.0;
    for k in 0..=16 {
        let t2 = 10f64.powf(k as f64 / 4.0);
        let curve = DecayCurve::from_pairs((0..=20).map(|i| {
            let t = 0.15 * t2 * i as f64;
            (t, (-t / t2).exp())
        }))
        .unwrap();
        worst_clean = worst_clean.max((fit_exponential(&curve).unwrap().t2 - t2).abs() / t2);
    }
    let mut errs: Vec<f64> = (0..100)
        .map(|seed| {
            let mut r = common::rng(500 + seed);
            let curve = DecayCurve::from_pairs((0..20).map(|i| {
                let t = 6.0 * i as f64;
                let noise: f64 = r.sample(StandardNormal);
                (t, (-t / 40.0).exp() * (1.0 + 0.01 * noise))
            }))
            .unwrap();
            (fit_exponential(&curve).unwrap().t2 - 40.0).abs() / 40.0
        })
        .collect();
    errs.sort_by(f64::total_cmp);
    let median = 0.5 * (errs[49] + errs[50]);
    check(
        bad == 0 && worst_clean <= 1e-6 && median <= 0.05,
        format!(
            "axiom/FvdG failures {bad}/1000, noiseless error {worst_clean:.1e}, noisy median {:.2}%",
            100.0 * median
        ),
    )
}

fn single_run_speed() -> Outcome {
    let bath = make_bath(&BathConfig { n_bath: 4, ..Default::default() }).unwrap();
    let t = TimingParams::from_units(0.02, 0.0, 0.0, TimeBase::new(1_000_000_000).unwrap()).unwrap();
    let rho0 = DensityMatrix::plus(1).tensor(&DensityMatrix::maximally_mixed(16));
    let start = Instant::now();
    let s = cdd_sequence(3, t).unwrap();
    let rho = run_schedule(&s, &bath.spec, bath.system, PulseModel::ideal(), &rho0).unwrap();
    let elapsed = start.elapsed();
    let _ = magnetization(&reduced_state(&rho, &bath.system).unwrap()).unwrap();
    check(elapsed < Duration::from_secs(1), format!("CDD3 at dimension 32 in {:.1} ms", elapsed.as_secs_f64() * 1e3))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 7] = [
        ("1 timing exactness", timing_exactness, Duration::from_secs(1)),
        ("2 decoupling identity", decoupling_identity, Duration::from_secs(10)),
        ("3 suppression-order scaling", suppression_scaling, Duration::from_secs(30)),
        ("4 CDD beats PDD at matched time", cdd_beats_pdd, Duration::from_secs(180)),
        ("5 finite-width rate trend", finite_width_trend, Duration::from_secs(300)),
        ("6 theory self-consistency", theory_consistency, Duration::from_secs(5)),
        ("7 metrics suite", metrics_suite, Duration::from_secs(30)),
    ];
    let suite = Instant::now();
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed < limit;
        failed += usize::from(!pass);
        println!(
            "{} [{name}] {} ({:.2} s, limit {} s)",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    let speed = single_run_speed();
    let total = suite.elapsed();
    let pass = speed.pass && total < Duration::from_secs(600);
    failed += usize::from(!pass);
    println!(
        "{} [8 runtime] {}; acceptance suite {:.1} s (limit 600 s)",
        if pass { "PASS" } else { "FAIL" },
        speed.detail,
        total.as_secs_f64()
    );
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
