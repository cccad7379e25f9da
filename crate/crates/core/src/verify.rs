//! Error measurement against analytic solutions and grid-refinement
//! convergence studies.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::ScalarField;
use crate::scenarios::Scenario;
use crate::solvers::Method;

/// Errors at one resolution of a convergence study.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConvergenceRow {
    pub m: usize,
    pub dx: f64,
    pub e_p: f64,
    pub e_u: f64,
    pub e_v: f64,
}

/// A completed refinement study: per-resolution errors plus the fitted
/// log-log slopes.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    /// One row per resolution, ordered by decreasing grid spacing.
    pub rows: Vec<ConvergenceRow>,
    pub fitted_order_p: f64,
    pub fitted_order_u: f64,
    pub fitted_order_v: f64,
    /// True when every error is below 1e-10: the scheme reproduces this
    /// solution to roundoff and the fitted slopes carry no information.
    /// A variable whose error vanishes identically reports order 0.
    pub exact_regime: bool,
    pub scenario_tag: String,
    pub method_tag: String,
}

/// Discrete L2 (root-mean-square) distance between a field and an oracle
/// sampled at each node's own coordinates, staggering included.
pub fn l2_error(numeric: &ScalarField, oracle: impl Fn(f64, f64) -> f64) -> f64 {
    let spec = numeric.spec();
    let role = numeric.role();
    let m = numeric.m();
    let mut sum = 0.0;
    for j in 0..m {
        for i in 0..m {
            let (x, y) = spec.node_coords(role, i, j).expect("node indices in range");
            let d = numeric.at(i, j) - oracle(x, y);
            sum += d * d;
        }
    }
    (sum / (m * m) as f64).sqrt()
}

/// Least-squares slope of log(error) against log(dx) over `points` of
/// (dx, error). Spacings and errors must be positive.
pub fn fit_order(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::FitTooFewPoints { got: points.len() });
    }
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(dx, err) in points {
        if !(dx > 0.0) || !(err > 0.0) {
            return Err(Error::FitNonPositive { dx, err });
        }
        let (lx, ly) = (dx.ln(), err.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    Ok((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

/// Threshold below which errors are treated as roundoff rather than
/// discretization error.
const EXACT_REGIME_BOUND: f64 = 1e-10;

/// Solve `scenario` with `method` at each resolution in `ms` (at least two,
/// strictly increasing) and fit the convergence orders of all three fields.
///
/// Projection runs its canonical single step with dt = dx^2. Solver
/// failures are annotated with the resolution that failed.
pub fn run_convergence(
    method: Method,
    scenario: &Scenario,
    ms: &[usize],
) -> Result<ConvergenceReport> {
    if ms.len() < 2 || ms.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadResolutionList);
    }
    if !scenario.has_analytic() {
        return Err(Error::UnsupportedCombination {
            what: format!(
                "a convergence study needs an analytic solution; the {} scenario \
                 with varying viscosity has none",
                scenario.tag()
            ),
        });
    }
    let mut rows = Vec::with_capacity(ms.len());
    for &m in ms {
        let sol = method.solve(scenario, m).map_err(|e| e.at_resolution(m))?;
        let exact = |pick: fn((f64, f64, f64)) -> f64| {
            move |x: f64, y: f64| pick(scenario.analytic_at(x, y).expect("analytic scenario"))
        };
        rows.push(ConvergenceRow {
            m,
            dx: sol.p.spec().dx,
            e_p: l2_error(&sol.p, exact(|s| s.0)),
            e_u: l2_error(&sol.u, exact(|s| s.1)),
            e_v: l2_error(&sol.v, exact(|s| s.2)),
        });
    }
    let exact_regime = rows.iter().all(|r| {
        r.e_p < EXACT_REGIME_BOUND && r.e_u < EXACT_REGIME_BOUND && r.e_v < EXACT_REGIME_BOUND
    });
    let order_of = |pick: fn(&ConvergenceRow) -> f64| -> Result<f64> {
        let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.dx, pick(r))).collect();
        if points.iter().any(|&(_, e)| e == 0.0) {
            // identically reproduced: no rate is observable
            return Ok(0.0);
        }
        fit_order(&points)
    };
    Ok(ConvergenceReport {
        fitted_order_p: order_of(|r| r.e_p)?,
        fitted_order_u: order_of(|r| r.e_u)?,
        fitted_order_v: order_of(|r| r.e_v)?,
        exact_regime,
        scenario_tag: scenario.tag().to_string(),
        method_tag: method.tag().to_string(),
        rows,
    })
}
