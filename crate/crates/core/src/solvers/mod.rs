//! The three Stokes solvers and their shared result types.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fd;
use crate::grid::{GridSpec, ScalarField, VariableRole};
use crate::scenarios::{BoundarySet, Scenario};
use crate::sparse::solve_linear;
use crate::DEFAULT_TOL;

mod decoupling;
mod projection;
mod saddle;

pub use decoupling::solve_decoupling;
pub use projection::{proj_divergence, projection_step, solve_projection, ProjectionState};
pub use saddle::solve_saddle_point;

/// Which of the three solution strategies to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    SaddlePoint,
    Decoupling,
    Projection,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::SaddlePoint, Method::Decoupling, Method::Projection];

    pub fn tag(self) -> &'static str {
        match self {
            Method::SaddlePoint => "saddle-point",
            Method::Decoupling => "decoupling",
            Method::Projection => "projection",
        }
    }

    /// Run the method in its canonical configuration: saddle-point on the
    /// staggered grid, projection as a single step with dt = dx^2.
    /// Convergence studies and timing comparisons all go through here.
    pub fn solve(self, scenario: &Scenario, m: usize) -> Result<Solution> {
        match self {
            Method::SaddlePoint => solve_saddle_point(scenario, m, GridMode::Staggered),
            Method::Decoupling => solve_decoupling(scenario, m),
            Method::Projection => solve_projection(scenario, m, 1, DtPolicy::DxSquared),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "saddle-point" | "saddle" => Ok(Method::SaddlePoint),
            "decoupling" => Ok(Method::Decoupling),
            "projection" => Ok(Method::Projection),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

/// Grid placement for the saddle-point solver: every variable on the same
/// nodes, or pressure at cell centers with face velocities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridMode {
    Collocated,
    Staggered,
}

/// Time-step choice for the projection method.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DtPolicy {
    /// dt = dx^2, the stability bound for the explicit diffusion step.
    DxSquared,
    /// A caller-supplied dt (must be positive and finite).
    Explicit(f64),
}

/// A solved flow field: pressure and both velocity components on one grid,
/// plus bookkeeping about how it was produced.
#[derive(Clone, Debug)]
pub struct Solution {
    pub p: ScalarField,
    pub u: ScalarField,
    pub v: ScalarField,
    pub method_tag: &'static str,
    pub m: usize,
    /// Seconds spent assembling, solving, and extracting.
    pub wall_time: f64,
    /// Relative residual of each linear solve performed, in solve order.
    pub linear_residuals: Vec<f64>,
}

/// Strength of odd/even pressure decoupling: the gap between the mean over
/// nodes with i+j even and the mean over i+j odd, normalized by the field's
/// value range. Zero for a constant field; at most 1 by construction.
pub fn checkerboard_metric(p: &ScalarField) -> f64 {
    let m = p.m();
    let (mut sum_even, mut sum_odd) = (0.0, 0.0);
    let (mut n_even, mut n_odd) = (0usize, 0usize);
    for j in 0..m {
        for i in 0..m {
            if (i + j) % 2 == 0 {
                sum_even += p.at(i, j);
                n_even += 1;
            } else {
                sum_odd += p.at(i, j);
                n_odd += 1;
            }
        }
    }
    let range = p.max() - p.min();
    if range == 0.0 {
        return 0.0;
    }
    (sum_even / n_even as f64 - sum_odd / n_odd as f64).abs() / range
}

/// Assemble and solve one Poisson problem for `role`, returning the field
/// and the relative residual of the linear solve.
pub(crate) fn poisson_solve(
    spec: &GridSpec,
    role: VariableRole,
    bc: &BoundarySet,
    rhs: &ScalarField,
) -> Result<(ScalarField, f64)> {
    let (a, b) = fd::assemble_poisson(spec, role, bc, rhs)?;
    let report = solve_linear(&a, &b, DEFAULT_TOL)?;
    let field = ScalarField::from_values(*spec, role, report.solution)?;
    Ok((field, report.relative_residual))
}
