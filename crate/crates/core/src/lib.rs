//! Finite-difference solvers for 2D incompressible Stokes flow.
//!
//! Three methods solve the same stationary problem and cross-validate each
//! other: a monolithic saddle-point solve over pressure and both velocity
//! components, a decoupling of the system into three sequential Poisson
//! solves, and a projection step that supports spatially varying viscosity.
//! Around them sit the supporting pieces: grid layouts and index maps,
//! sparse assembly and a direct linear solve, boundary-condition stencils,
//! flow scenarios with analytic solutions, a convergence harness, timing
//! utilities, and report writers for CSV and JSON.

pub mod error;
pub mod fd;
pub mod grid;
pub mod report;
pub mod scenarios;
pub mod solvers;
pub mod sparse;
pub mod timing;
pub mod verify;

pub use error::{Error, Result};
pub use fd::{Direction, StencilRow, ViscosityField};
pub use grid::{GridSpec, IndexMap, Layout, ScalarField, VariableRole};
pub use report::{
    convergence_csv, convergence_json, fmt_f64, solution_csv, solution_json, timing_csv,
    timing_json,
};
pub use scenarios::{
    membrane_force, mollified_delta, pipe_analytic, signed_distance, vesicle_analytic,
    BoundarySet, Condition, Edge, EdgeValue, ForceField, PipeParams, Scenario, VesicleParams,
};
pub use solvers::{
    checkerboard_metric, proj_divergence, projection_step, solve_decoupling, solve_projection,
    solve_saddle_point, DtPolicy, GridMode, Method, ProjectionState, Solution,
};
pub use sparse::{solve_linear, SolveReport, SparseMatrix, Triplet};
pub use timing::{time_solver, timing_ratios, RatioReport, RatioRow, TimingSample};
pub use verify::{fit_order, l2_error, run_convergence, ConvergenceReport, ConvergenceRow};

/// Default relative-residual tolerance for all linear solves: two orders
/// below the finest expected discretization error, so solver error never
/// pollutes a convergence study.
pub const DEFAULT_TOL: f64 = 1e-10;
