//! Shared configuration for the criterion benchmarks and a thin seam over
//! the core timing utilities.
//!
//! The heavyweight timing logic (warm-ups, repeat statistics, cost ratios)
//! lives in the core crate so the CLI and the acceptance tests share it;
//! this crate adds the criterion harness around the same solves.

use stokes2d_core::{Scenario, VesicleParams};

/// Resolutions benchmarked by default, matching the timing study grid.
pub const DEFAULT_MS: [usize; 6] = [25, 50, 75, 100, 150, 200];

/// Resolutions small enough for a quick local run.
pub const QUICK_MS: [usize; 2] = [25, 50];

/// The benchmark problem: the canonical constant-viscosity vesicle, the
/// one scenario all three methods accept.
pub fn bench_scenario() -> Scenario {
    Scenario::Vesicle(VesicleParams::defaults())
}
