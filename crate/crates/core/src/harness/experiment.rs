// SPDX-License-Identifier: Apache-2.0

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::config::{BathState, ExperimentConfig, SystemState};
use super::{make_bath, Bath};
use crate::dynamics::{reduced_state, DensityMatrix, Simulator, SpinSystem};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, C64};
use crate::metrics::{self, fit_exponential, DecayCurve, FitResult};
use crate::sequence::{Schedule, Ticks, TimingParams};
use crate::theory;

/// Offset added to the bath seed when drawing a random pure bath state, so
/// the state is independent of the Hamiltonian coefficients.
const STATE_SEED_OFFSET: u64 = 0x5eed_5747;

/// One bath instance at one time point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedPoint {
    pub seed: u64,
    pub signal: f64,
    pub distance: f64,
}

/// One time point of a curve, averaged over bath instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// What was run, e.g. `CDD_2`, `PDD_4`, `free` or `CDD_3x5` (five cycles).
    pub schedule: String,
    /// CDD level governing this point, used for `ε`; `None` for free evolution.
    pub level: Option<u32>,
    pub total_time_ticks: u64,
    pub total_time: f64,
    pub signal: f64,
    pub distance: f64,
    pub per_seed: Vec<SeedPoint>,
}

/// Signal versus total time for one protocol at one τ₀.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceCurve {
    pub label: String,
    pub tau0: f64,
    pub points: Vec<CurvePoint>,
}

impl SequenceCurve {
    /// Seed-averaged signal as a fit input.
    pub fn decay_curve(&self) -> Result<DecayCurve> {
        let curve = DecayCurve::from_pairs(self.points.iter().map(|p| (p.total_time, p.signal)))?;
        Ok(DecayCurve { tau0: Some(self.tau0), ..curve.with_label(self.label.clone()) })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub j: f64,
    pub beta: f64,
    pub seeds: Vec<u64>,
    pub curves: Vec<SequenceCurve>,
}

/// What to evolve for one time point.
#[derive(Debug, Clone)]
enum Protocol {
    /// `cycle` repeated `reps` times.
    Pulsed {
        cycle: Schedule,
        reps: usize,
    },
    Free {
        ticks: Ticks,
    },
}

#[derive(Debug, Clone)]
struct PointPlan {
    schedule: String,
    level: Option<u32>,
    protocol: Protocol,
    /// Total evolution time at this point.
    elapsed: Ticks,
}

impl Protocol {
    fn ticks(&self) -> Ticks {
        match self {
            Protocol::Pulsed { cycle, reps } => cycle.total_duration() * (*reps as u64),
            Protocol::Free { ticks } => *ticks,
        }
    }
}

impl PointPlan {
    fn single(schedule: String, level: Option<u32>, protocol: Protocol) -> Self {
        let elapsed = protocol.ticks();
        Self { schedule, level, protocol, elapsed }
    }
}

#[derive(Debug, Clone)]
struct CurvePlan {
    label: String,
    points: Vec<PointPlan>,
}

/// Every curve at one τ₀.
#[derive(Debug, Clone)]
struct Plan {
    tau0: f64,
    timing: TimingParams,
    curves: Vec<CurvePlan>,
}

fn wrap(label: &str, tau0: f64) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        e @ Error::Simulation { .. } => e,
        e => Error::Simulation { label: label.to_string(), tau0, source: Box::new(e) },
    }
}

/// Maps in parallel when enabled; results keep the input order either way.
fn map_ordered<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

fn initial_state(cfg: &ExperimentConfig, sys: &SpinSystem, seed: u64) -> Result<DensityMatrix> {
    let rho_s = match cfg.initial.system {
        SystemState::Plus => DensityMatrix::plus(sys.n_system),
        SystemState::Zero => DensityMatrix::ground(sys.n_system),
    };
    let rho_b = match cfg.initial.bath {
        BathState::MaximallyMixed => DensityMatrix::maximally_mixed(sys.dim_bath()),
        BathState::RandomPure => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ STATE_SEED_OFFSET);
            let psi = nalgebra::DVector::from_fn(sys.dim_bath(), |_, _| {
                C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
            });
            DensityMatrix::from_pure(&psi)?
        }
    };
    Ok(rho_s.tensor(&rho_b))
}

/// Preservation signal of the reduced system state.
///
/// One qubit prepared in `|+⟩`: transverse magnetization. Otherwise the
/// fidelity with the initial reduced state.
fn signal(cfg: &ExperimentConfig, rho_s: &DensityMatrix, initial_s: &DensityMatrix) -> Result<f64> {
    if rho_s.dim() == 2 && cfg.initial.system == SystemState::Plus {
        metrics::magnetization(rho_s)
    } else {
        metrics::fidelity(rho_s, initial_s)
    }
}

/// Both simulators and the starting state for one bath instance.
struct Instance {
    sim: Simulator,
    reference: Simulator,
    rho0: DensityMatrix,
    initial_s: DensityMatrix,
}

impl Instance {
    fn new(cfg: &ExperimentConfig, bath: &Bath, seed: u64) -> Result<Self> {
        let sim = Simulator::new(&bath.spec, bath.system, cfg.pulse_model)?;
        let reference = Simulator::new(&bath.spec.without_coupling(&bath.system), bath.system, cfg.pulse_model)?;
        let rho0 = initial_state(cfg, &bath.system, seed)?;
        let initial_s = reduced_state(&rho0, &bath.system)?;
        Ok(Self { sim, reference, rho0, initial_s })
    }

    fn block(sim: &mut Simulator, p: &Protocol, base: crate::sequence::TimeBase) -> Result<Matrix> {
        match p {
            Protocol::Pulsed { cycle, reps } => {
                let u1 = sim.schedule_unitary(cycle)?;
                let mut u = linalg::identity(u1.nrows());
                for _ in 0..*reps {
                    u = &u1 * u;
                }
                Ok(u)
            }
            Protocol::Free { ticks } => Ok(sim.free_unitary(base.to_units(*ticks))),
        }
    }

    fn measure(&self, rho: &DensityMatrix, rho_ref: &DensityMatrix, cfg: &ExperimentConfig) -> Result<(f64, f64)> {
        let sys = *self.sim.system();
        let r = reduced_state(rho, &sys)?;
        let r_ref = reduced_state(rho_ref, &sys)?;
        Ok((signal(cfg, &r, &self.initial_s)?, metrics::trace_distance(&r, &r_ref)?))
    }
}

/// Runs one bath instance through every point of a plan. In `cumulative`
/// mode every point of a curve shares one block, applied once more per
/// point; otherwise each point starts again from the initial state.
fn run_instance(cfg: &ExperimentConfig, plan: &Plan, seed: u64, cumulative: bool) -> Result<Vec<Vec<SeedPoint>>> {
    let wrap_all = wrap("bath", plan.tau0);
    let bath_cfg = super::BathConfig { seed, ..cfg.bath.clone() };
    let bath = make_bath(&bath_cfg).map_err(&wrap_all)?;
    let mut inst = Instance::new(cfg, &bath, seed).map_err(&wrap_all)?;
    let base = plan.timing.base;

    let mut out = Vec::with_capacity(plan.curves.len());
    for curve in &plan.curves {
        let w = wrap(&curve.label, plan.tau0);
        let mut rho = inst.rho0.clone();
        let mut rho_ref = inst.rho0.clone();
        let mut pts = Vec::with_capacity(curve.points.len());
        let mut shared: Option<(Matrix, Matrix)> = None;
        for point in &curve.points {
            let (u, u_ref) = match &shared {
                Some(pair) => pair.clone(),
                None => {
                    let u = Instance::block(&mut inst.sim, &point.protocol, base).map_err(&w)?;
                    let u_ref = Instance::block(&mut inst.reference, &point.protocol, base).map_err(&w)?;
                    if cumulative {
                        shared = Some((u.clone(), u_ref.clone()));
                    }
                    (u, u_ref)
                }
            };
            if !cumulative {
                rho = inst.rho0.clone();
                rho_ref = inst.rho0.clone();
            }
            rho = rho.conjugate(&u);
            rho_ref = rho_ref.conjugate(&u_ref);
            let (signal, distance) = inst.measure(&rho, &rho_ref, cfg).map_err(&w)?;
            pts.push(SeedPoint { seed, signal, distance });
        }
        out.push(pts);
    }
    Ok(out)
}

fn execute(cfg: &ExperimentConfig, plans: &[Plan], cumulative: bool) -> Result<ExperimentResult> {
    let seeds = cfg.seed_list();
    let tasks: Vec<(usize, u64)> = (0..plans.len()).flat_map(|p| seeds.iter().map(move |&s| (p, s))).collect();
    let results = map_ordered(&tasks, |&(p, s)| run_instance(cfg, &plans[p], s, cumulative));

    let mut results = results.into_iter();
    let mut curves = Vec::new();
    for plan in plans {
        let per_seed: Vec<Vec<Vec<SeedPoint>>> = results.by_ref().take(seeds.len()).collect::<Result<_>>()?;
        for (ci, curve) in plan.curves.iter().enumerate() {
            let points = curve
                .points
                .iter()
                .enumerate()
                .map(|(pi, pp)| {
                    let seeds_here: Vec<SeedPoint> = per_seed.iter().map(|s| s[ci][pi].clone()).collect();
                    let n = seeds_here.len() as f64;
                    let ticks = pp.elapsed;
                    CurvePoint {
                        schedule: pp.schedule.clone(),
                        level: pp.level,
                        total_time_ticks: ticks.get(),
                        total_time: plan.timing.base.to_units(ticks),
                        signal: seeds_here.iter().map(|s| s.signal).sum::<f64>() / n,
                        distance: seeds_here.iter().map(|s| s.distance).sum::<f64>() / n,
                        per_seed: seeds_here,
                    }
                })
                .collect();
            curves.push(SequenceCurve { label: curve.label.clone(), tau0: plan.tau0, points });
        }
    }
    Ok(ExperimentResult { j: cfg.bath.j, beta: cfg.bath.beta, seeds, curves })
}

/// Free, PDD and CDD curves: one point per CDD level (`CDD_n` once), PDD
/// with the configured cycle counts, and free evolution sampled at the CDD
/// total times. Every point starts from the initial state.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let compiler = cfg.compiler()?;
    let set = &cfg.sequences;
    let mut plans = Vec::new();
    for tau0 in cfg.tau0_values() {
        let timing = cfg.timing.params(tau0)?;
        let mut cdd = Vec::new();
        for &n in &set.cdd_levels {
            let s = compiler.cdd(n, timing).map_err(wrap("CDD", tau0))?;
            cdd.push(PointPlan::single(s.label.clone(), Some(n), Protocol::Pulsed { cycle: s, reps: 1 }));
        }
        cdd.sort_by_key(|p| p.elapsed);
        let mut curves = Vec::new();
        if set.free {
            let points = cdd
                .iter()
                .map(|p| PointPlan::single("free".into(), None, Protocol::Free { ticks: p.elapsed }))
                .filter(|p| !p.elapsed.is_zero())
                .collect();
            curves.push(CurvePlan { label: "free".into(), points });
        }
        if set.pdd {
            let mut points = Vec::new();
            for k in set.pdd_cycle_counts() {
                let s = compiler.pdd(k, timing).map_err(wrap("PDD", tau0))?;
                points.push(PointPlan::single(s.label.clone(), Some(1), Protocol::Pulsed { cycle: s, reps: 1 }));
            }
            points.sort_by_key(|p| p.elapsed);
            curves.push(CurvePlan { label: "PDD".into(), points });
        }
        if !cdd.is_empty() {
            curves.push(CurvePlan { label: "CDD".into(), points: cdd });
        }
        plans.push(Plan { tau0, timing, curves });
    }
    execute(cfg, &plans, false)
}

/// Fitted rate for one curve at one τ₀.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub label: String,
    pub tau0: f64,
    pub fit: Option<FitResult>,
    /// Why the fit failed, when it did.
    pub error: Option<String>,
    pub j_tau0: f64,
    pub beta_tau0: f64,
    pub epsilon: Option<f64>,
}

impl RateRow {
    pub fn rate(&self) -> Option<f64> {
        self.fit.map(|f| f.rate)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RateTable {
    pub rows: Vec<RateRow>,
}

impl RateTable {
    /// `(τ₀, rate)` for one label, in grid order.
    pub fn series(&self, label: &str) -> Vec<(f64, Option<f64>)> {
        self.rows.iter().filter(|r| r.label == label).map(|r| (r.tau0, r.rate())).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.label) {
                out.push(r.label.clone());
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub table: RateTable,
    pub experiment: ExperimentResult,
}

/// Decoherence rate versus τ₀.
///
/// For each τ₀ and each level in `sweep.cdd_levels` the CDD cycle is applied
/// `m = 1..=cycles` times, the seed-averaged signal after each repetition is
/// recorded, and an exponential is fitted. The optional PDD and free curves
/// use the same time grid as `sweep.pdd_match_level`. Fit failures are kept
/// in the table rather than aborting the sweep.
pub fn sweep_tau0(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let sw = &cfg.sweep;
    if sw.cycles == 0 {
        return Err(Error::InvalidConfig("sweep.cycles must be at least 1".into()));
    }
    let compiler = cfg.compiler()?;
    let grid_level = sw.pdd_match_level.or_else(|| sw.cdd_levels.iter().copied().max()).unwrap_or(1);

    let mut plans = Vec::new();
    for tau0 in cfg.tau0_values() {
        let timing = cfg.timing.params(tau0)?;
        let repeated = |label: String, protocol: Protocol, name: &str, level: Option<u32>| CurvePlan {
            points: (1..=sw.cycles)
                .map(|m| PointPlan {
                    schedule: format!("{name}x{m}"),
                    level,
                    elapsed: protocol.ticks() * m as u64,
                    protocol: protocol.clone(),
                })
                .collect(),
            label,
        };
        let mut curves = Vec::new();
        for &n in &sw.cdd_levels {
            let s = compiler.cdd(n, timing).map_err(wrap("CDD", tau0))?;
            let name = s.label.clone();
            curves.push(repeated(name.clone(), Protocol::Pulsed { cycle: s, reps: 1 }, &name, Some(n)));
        }
        if let Some(level) = sw.pdd_match_level {
            let k = 4usize
                .checked_pow(level.saturating_sub(1))
                .ok_or_else(|| Error::InvalidConfig(format!("pdd_match_level {level} is too large")))?;
            let s = compiler.pdd(1, timing).map_err(wrap("PDD", tau0))?;
            let name = format!("PDD_{k}");
            curves.push(repeated("PDD".into(), Protocol::Pulsed { cycle: s, reps: k }, &name, Some(1)));
        }
        if sw.free {
            let block = compiler.cdd(grid_level, timing).map_err(wrap("free", tau0))?.total_duration();
            curves.push(repeated("free".into(), Protocol::Free { ticks: block }, "free", None));
        }
        plans.push(Plan { tau0, timing, curves });
    }

    let experiment = execute(cfg, &plans, true)?;
    let (j, beta) = (cfg.bath.j, cfg.bath.beta);
    let rows = experiment
        .curves
        .iter()
        .map(|c| {
            let level = c.points.first().and_then(|p| p.level);
            let (fit, error) = match c.decay_curve().and_then(|d| fit_exponential(&d)) {
                Ok(f) => (Some(f), None),
                Err(e) => (None, Some(e.to_string())),
            };
            RateRow {
                label: c.label.clone(),
                tau0: c.tau0,
                fit,
                error,
                j_tau0: j * c.tau0,
                beta_tau0: beta * c.tau0,
                epsilon: level.map(|n| theory::epsilon(beta, c.tau0, n)),
            }
        })
        .collect();
    Ok(SweepResult { table: RateTable { rows }, experiment })
}
