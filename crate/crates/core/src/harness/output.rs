// SPDX-License-Identifier: Apache-2.0

use super::{ExperimentResult, RateTable};
use crate::error::{Error, Result};
use crate::theory;

/// Header of the per-point CSV. One row per seed, plus a `mean` row per point.
pub const CURVE_COLUMNS: [&str; 10] =
    ["label", "tau0", "total_time", "signal", "seed", "schedule", "distance", "j_tau0", "beta_tau0", "epsilon"];

pub const RATE_COLUMNS: [&str; 10] =
    ["label", "tau0", "rate", "t2", "s0", "residual", "j_tau0", "beta_tau0", "epsilon", "error"];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidConfig(format!("csv: {e}")))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidConfig(format!("csv: {e}"))
}

/// Every curve point as CSV. Floats use the shortest round-trip form, so
/// identical results give identical bytes.
pub fn curves_csv(result: &ExperimentResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CURVE_COLUMNS).map_err(csv_err)?;
    for c in &result.curves {
        let j_tau0 = (result.j * c.tau0).to_string();
        let beta_tau0 = (result.beta * c.tau0).to_string();
        for p in &c.points {
            let eps = opt(p.level.map(|n| theory::epsilon(result.beta, c.tau0, n)));
            let rows = p.per_seed.iter().map(|s| (s.seed.to_string(), s.signal, s.distance)).chain(std::iter::once((
                "mean".to_string(),
                p.signal,
                p.distance,
            )));
            for (seed, signal, distance) in rows {
                w.write_record([
                    c.label.as_str(),
                    &c.tau0.to_string(),
                    &p.total_time.to_string(),
                    &signal.to_string(),
                    &seed,
                    &p.schedule,
                    &distance.to_string(),
                    &j_tau0,
                    &beta_tau0,
                    &eps,
                ])
                .map_err(csv_err)?;
            }
        }
    }
    finish(w)
}

/// The rate table as CSV; `t2` is empty when no decay was detected and the
/// fit columns are empty when the fit failed.
pub fn rates_csv(table: &RateTable) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RATE_COLUMNS).map_err(csv_err)?;
    for r in &table.rows {
        let f = r.fit;
        w.write_record([
            r.label.as_str(),
            &r.tau0.to_string(),
            &opt(f.map(|f| f.rate)),
            &opt(f.map(|f| f.t2).filter(|t| t.is_finite())),
            &opt(f.map(|f| f.s0)),
            &opt(f.map(|f| f.residual)),
            &r.j_tau0.to_string(),
            &r.beta_tau0.to_string(),
            &opt(r.epsilon),
            r.error.as_deref().unwrap_or(""),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}
