// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Fitted rates below this (per time unit) are reported as no decay.
pub const ZERO_DECAY_RATE: f64 = 1e-9;

const MAX_ITERATIONS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecaySample {
    pub time: f64,
    pub signal: f64,
}

/// Signal versus total evolution time for one sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCurve {
    pub samples: Vec<DecaySample>,
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub tau0: Option<f64>,
    #[serde(default)]
    pub pulse_model: Option<String>,
}

impl DecayCurve {
    /// Times must be finite and strictly increasing.
    pub fn new(samples: Vec<DecaySample>) -> Result<Self> {
        if samples.iter().any(|s| !s.time.is_finite() || !s.signal.is_finite()) {
            return Err(Error::InsufficientData("non-finite sample".into()));
        }
        if samples.windows(2).any(|w| w[1].time <= w[0].time) {
            return Err(Error::InsufficientData("sample times must be strictly increasing".into()));
        }
        Ok(Self { samples, label: String::new(), tau0: None, pulse_model: None })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(time, signal)| DecaySample { time, signal }).collect())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Parameters of `S(t) = S₀ exp(−t/T₂)`.
///
/// `t2` is infinite (and `rate` zero) when the fitted rate falls below
/// [`ZERO_DECAY_RATE`]; it serializes as `null` in that case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub s0: f64,
    #[serde(serialize_with = "ser_t2", deserialize_with = "de_t2")]
    pub t2: f64,
    pub rate: f64,
    pub residual: f64,
    pub iterations: usize,
}

fn ser_t2<S: Serializer>(t2: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if t2.is_finite() {
        s.serialize_f64(*t2)
    } else {
        s.serialize_none()
    }
}

fn de_t2<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

impl FitResult {
    pub fn is_zero_decay(&self) -> bool {
        self.rate == 0.0
    }

    pub fn predict(&self, t: f64) -> f64 {
        self.s0 * (-t * self.rate).exp()
    }
}

fn cost(s0: f64, k: f64, ts: &[f64], ys: &[f64]) -> f64 {
    ts.iter().zip(ys).map(|(t, y)| (s0 * (-k * t).exp() - y).powi(2)).sum()
}

/// Unweighted least-squares fit of `S₀ e^{−t/T₂}`.
///
/// Starts from a log-linear regression on the positive samples and refines
/// with damped Gauss–Newton on the nonlinear residual. Time is rescaled to
/// the data span internally.
pub fn fit_exponential(curve: &DecayCurve) -> Result<FitResult> {
    if curve.len() < 3 {
        return Err(Error::InsufficientData(format!("{} samples, need at least 3", curve.len())));
    }
    let positive = curve.samples.iter().filter(|s| s.signal > 0.0).count();
    if positive < 2 {
        return Err(Error::InsufficientData("fewer than two positive signal values".into()));
    }

    let scale = curve.samples.iter().map(|s| s.time.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let ts: Vec<f64> = curve.samples.iter().map(|s| s.time / scale).collect();
    let ys: Vec<f64> = curve.samples.iter().map(|s| s.signal).collect();

    // log-linear start: ln y = a − k t
    let (lt, ly): (Vec<f64>, Vec<f64>) =
        ts.iter().zip(&ys).filter(|(_, &y)| y > 0.0).map(|(&t, &y)| (t, y.ln())).unzip();
    let n = lt.len() as f64;
    let mt = lt.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lt.iter().map(|t| (t - mt).powi(2)).sum();
    let sxy: f64 = lt.iter().zip(&ly).map(|(t, y)| (t - mt) * (y - my)).sum();
    let mut k = if sxx > 0.0 { -sxy / sxx } else { 0.0 };
    let mut s0 = (my + k * mt).exp();

    let mut current = cost(s0, k, &ts, &ys);
    let mut lambda = 1e-3;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (mut a11, mut a12, mut a22, mut g1, mut g2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (&t, &y) in ts.iter().zip(&ys) {
            let e = (-k * t).exp();
            let r = s0 * e - y;
            let (j1, j2) = (e, -s0 * t * e);
            a11 += j1 * j1;
            a12 += j1 * j2;
            a22 += j2 * j2;
            g1 += j1 * r;
            g2 += j2 * r;
        }
        if g1.hypot(g2) <= 1e-15 * (1.0 + current.sqrt()) {
            converged = true;
            break;
        }
        let (d11, d22) = (a11 * (1.0 + lambda), a22 * (1.0 + lambda));
        let det = d11 * d22 - a12 * a12;
        if det.abs() < 1e-300 {
            lambda *= 10.0;
            continue;
        }
        let ds0 = -(d22 * g1 - a12 * g2) / det;
        let dk = -(d11 * g2 - a12 * g1) / det;
        let (ns0, nk) = (s0 + ds0, k + dk);
        let trial = cost(ns0, nk, &ts, &ys);
        if trial.is_finite() && trial <= current {
            let small = ds0.abs() <= 1e-13 * (1.0 + s0.abs()) && dk.abs() <= 1e-13 * (1.0 + k.abs());
            s0 = ns0;
            k = nk;
            current = trial;
            lambda = (lambda / 10.0).max(1e-12);
            if small {
                converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e14 {
                // no descent direction left at working precision
                converged = true;
                break;
            }
        }
    }
    if !converged || !s0.is_finite() || !k.is_finite() {
        return Err(Error::FitDidNotConverge { iterations });
    }

    let mut rate = k / scale;
    if rate < ZERO_DECAY_RATE {
        rate = 0.0;
    }
    let t2 = if rate == 0.0 { f64::INFINITY } else { 1.0 / rate };
    let residual = (current / ys.len() as f64).sqrt();
    Ok(FitResult { s0, t2, rate, residual, iterations })
}
