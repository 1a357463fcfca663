// SPDX-License-Identifier: Apache-2.0

//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes plain numbers or a JSON string and returns JSON, so the
//! page needs no generated types. The `*_json` functions hold the logic and
//! are what native tests call; the `#[wasm_bindgen]` wrappers only convert
//! errors into JS exceptions.

use cdd_core::harness::{self, ExperimentConfig};
use cdd_core::metrics::fit_exponential;
use cdd_core::sequence::{BasePair, SequenceCompiler, TimeBase, TimingParams};
use cdd_core::theory;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Event cap for the page; a CDD₇ cycle has about 36k events.
const MAX_EVENTS: usize = 100_000;
/// The page works in µs with 1 ns ticks.
const TICKS_PER_UNIT: u64 = 1000;

fn err(e: impl ToString) -> String {
    json!({ "error": e.to_string() }).to_string()
}

/// Schedule for CDD level `level`, or PDD with `pdd_cycles` cycles when that
/// is non-zero.
pub fn compile_schedule_json(
    level: u32,
    pdd_cycles: u32,
    tau0: f64,
    delta: f64,
    fa: f64,
    pair: &str,
) -> Result<String, String> {
    let pair: BasePair = pair.parse().map_err(err)?;
    let compiler = SequenceCompiler::new(pair, MAX_EVENTS);
    let base = TimeBase::new(TICKS_PER_UNIT).map_err(err)?;
    let timing = TimingParams::from_units(tau0, delta, fa, base).map_err(err)?;
    let schedule = if pdd_cycles > 0 { compiler.pdd(pdd_cycles as usize, timing) } else { compiler.cdd(level, timing) }
        .map_err(err)?;
    let events: Vec<Value> = schedule
        .events
        .iter()
        .map(|e| {
            json!({
                "start": base.to_units(e.start),
                "duration": base.to_units(e.kind.duration()),
                "kind": e.kind.name(),
                "axis": e.kind.axis().map(|a| a.to_string()),
            })
        })
        .collect();
    Ok(json!({ "summary": schedule.summary(), "events": events }).to_string())
}

/// ε and both bounds for levels `0..=max_level`, with PDD at equal total time.
pub fn theory_curve_json(j: f64, beta: f64, tau0: f64, max_level: u32) -> Result<String, String> {
    let mut rows = Vec::new();
    for n in 0..=max_level {
        let r = theory::report(j, beta, tau0, Some(n), None, None).map_err(err)?;
        rows.push(json!({ "level": n, "epsilon": r.epsilon, "cdd_bound": r.cdd_bound, "pdd_bound": r.pdd_bound }));
    }
    Ok(json!({
        "levels": rows,
        "optimal_level": theory::optimal_level(beta, tau0),
        "optimal_level_continuous": theory::optimal_level_continuous(beta, tau0),
        "pessimistic": theory::is_pessimistic(j, beta),
    })
    .to_string())
}

/// Runs the repeated-cycle sweep for an [`ExperimentConfig`] given as JSON
/// (missing keys take defaults) and returns each curve with its fit.
pub fn simulate_decay_json(config: &str) -> Result<String, String> {
    let cfg: ExperimentConfig = serde_json::from_str(config).map_err(err)?;
    let result = harness::sweep_tau0(&cfg).map_err(err)?;
    let curves: Vec<Value> = result
        .experiment
        .curves
        .iter()
        .map(|c| {
            let fit = c.decay_curve().and_then(|d| fit_exponential(&d));
            json!({
                "label": c.label,
                "tau0": c.tau0,
                "time": c.points.iter().map(|p| p.total_time).collect::<Vec<_>>(),
                "signal": c.points.iter().map(|p| p.signal).collect::<Vec<_>>(),
                "fit": fit.ok(),
            })
        })
        .collect();
    Ok(json!({ "j": result.experiment.j, "beta": result.experiment.beta, "curves": curves }).to_string())
}

#[wasm_bindgen]
pub fn compile_schedule(
    level: u32,
    pdd_cycles: u32,
    tau0: f64,
    delta: f64,
    fa: f64,
    pair: &str,
) -> Result<String, JsValue> {
    compile_schedule_json(level, pdd_cycles, tau0, delta, fa, pair).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn theory_curve(j: f64, beta: f64, tau0: f64, max_level: u32) -> Result<String, JsValue> {
    theory_curve_json(j, beta, tau0, max_level).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn simulate_decay(config: &str) -> Result<String, JsValue> {
    simulate_decay_json(config).map_err(|e| JsValue::from_str(&e))
}
