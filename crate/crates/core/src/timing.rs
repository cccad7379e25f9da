//! Wall-clock measurement of the solvers and the cost ratios between
//! methods at matched resolutions.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scenarios::Scenario;
use crate::solvers::Method;

/// Timing statistics for one (method, resolution) pair.
#[derive(Clone, Debug, Serialize)]
pub struct TimingSample {
    pub method_tag: &'static str,
    pub m: usize,
    pub repeats: usize,
    pub mean_seconds: f64,
    pub min_seconds: f64,
    pub stddev_seconds: f64,
}

/// Per-resolution cost of the one-shot methods relative to a projection
/// step.
#[derive(Clone, Debug, Serialize)]
pub struct RatioRow {
    pub m: usize,
    pub saddle_over_projection: f64,
    pub decoupling_over_projection: f64,
}

/// Cost ratios across every resolution present in a timing set.
#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
}

/// Run `method` on `scenario` at resolution `m`, once untimed to warm
/// caches and allocators, then `repeats` timed runs.
///
/// Each timed run covers assembly, the linear solve(s), and solution
/// extraction; projection is timed for exactly one step. Runs execute
/// strictly one after another on a monotonic clock.
pub fn time_solver(
    method: Method,
    scenario: &Scenario,
    m: usize,
    repeats: usize,
) -> Result<TimingSample> {
    if repeats == 0 {
        return Err(Error::ZeroRepeats);
    }
    method.solve(scenario, m)?; // warm-up, discarded
    let mut times = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        method.solve(scenario, m)?;
        times.push(start.elapsed().as_secs_f64());
    }
    let n = repeats as f64;
    let mean = times.iter().sum::<f64>() / n;
    let min = times.iter().copied().fold(f64::INFINITY, f64::min);
    let var = times.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / n;
    Ok(TimingSample {
        method_tag: method.tag(),
        m,
        repeats,
        mean_seconds: mean,
        min_seconds: min,
        stddev_seconds: var.sqrt(),
    })
}

/// Compute saddle/projection and decoupling/projection mean-time ratios at
/// every resolution in `samples`.
///
/// All three methods must be present at each resolution that appears; a
/// repeated (method, M) pair keeps the latest sample.
pub fn timing_ratios(samples: &[TimingSample]) -> Result<RatioReport> {
    let mut by_m: BTreeMap<usize, BTreeMap<&'static str, f64>> = BTreeMap::new();
    for s in samples {
        let method: Method = s.method_tag.parse()?;
        by_m.entry(s.m).or_default().insert(method.tag(), s.mean_seconds);
    }
    let mut rows = Vec::with_capacity(by_m.len());
    for (&m, means) in &by_m {
        let get = |method: Method| -> Result<f64> {
            means
                .get(method.tag())
                .copied()
                .ok_or(Error::IncompleteTimingSet { method: method.tag(), m })
        };
        let proj = get(Method::Projection)?;
        rows.push(RatioRow {
            m,
            saddle_over_projection: get(Method::SaddlePoint)? / proj,
            decoupling_over_projection: get(Method::Decoupling)? / proj,
        });
    }
    Ok(RatioReport { rows })
}
