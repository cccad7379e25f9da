//! The projection solver: an explicit viscous step ignoring pressure, a
//! pressure Poisson solve from the divergence of the intermediate
//! velocity, and a gradient correction back onto the divergence-free
//! space. The explicit step evaluates the full viscous stress divergence,
//! so spatially varying viscosity is supported.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::fd::{proj_gradient_rows, stress_divergence, wall_offset, WallOffset, EDGES};
use crate::grid::{GridSpec, Layout, ScalarField, VariableRole};
use crate::scenarios::{BoundarySet, Condition, Edge, ForceField, Scenario};

use super::{poisson_solve, DtPolicy, Solution};

/// One time level of the projection iteration.
#[derive(Clone, Debug)]
pub struct ProjectionState {
    pub u: ScalarField,
    pub v: ScalarField,
    /// Pressure from the most recent step (zero before the first).
    pub p: ScalarField,
    /// Elapsed simulated time.
    pub t: f64,
    pub dt: f64,
    /// Relative residual of the most recent pressure solve.
    pub pressure_residual: f64,
}

impl ProjectionState {
    /// The rest state u = v = p = 0 at t = 0.
    pub fn initial(spec: GridSpec, dt: f64) -> Result<ProjectionState> {
        if spec.layout != Layout::ProjectionStaggered {
            return Err(Error::WrongLayout {
                expected: Layout::ProjectionStaggered,
                got: spec.layout,
            });
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::NonPositiveDt { dt });
        }
        Ok(ProjectionState {
            u: ScalarField::zeros(spec, VariableRole::U),
            v: ScalarField::zeros(spec, VariableRole::V),
            p: ScalarField::zeros(spec, VariableRole::P),
            t: 0.0,
            dt,
            pressure_residual: 0.0,
        })
    }
}

/// Discrete divergence of a velocity pair on the shared staggered lattice,
/// one value per pressure cell: each cell averages the two compact
/// differences of the corner velocities on its sides. Corners past the
/// left/bottom walls take the no-slip wall value zero.
pub fn proj_divergence(u: &ScalarField, v: &ScalarField) -> Result<ScalarField> {
    let spec = *u.spec();
    if spec.layout != Layout::ProjectionStaggered {
        return Err(Error::WrongLayout {
            expected: Layout::ProjectionStaggered,
            got: spec.layout,
        });
    }
    if v.m() != u.m() || v.spec().layout != spec.layout {
        return Err(Error::DimensionMismatch {
            what: "divergence velocity resolution",
            expected: u.m(),
            got: v.m(),
        });
    }
    let m = spec.m;
    let h = spec.dx;
    let at = |f: &ScalarField, i: isize, j: isize| -> f64 {
        if i < 0 || j < 0 {
            0.0
        } else {
            f.at(i as usize, j as usize)
        }
    };
    let mut div = ScalarField::zeros(spec, VariableRole::P);
    for j in 0..m as isize {
        for i in 0..m as isize {
            let ux = (at(u, i, j) - at(u, i - 1, j) + at(u, i, j - 1) - at(u, i - 1, j - 1))
                / (2.0 * h);
            let vy = (at(v, i, j) - at(v, i, j - 1) + at(v, i - 1, j) - at(v, i - 1, j - 1))
                / (2.0 * h);
            div.set(i as usize, j as usize, ux + vy);
        }
    }
    Ok(div)
}

/// Write the Dirichlet boundary values onto the velocity nodes that lie on
/// a wall (the right and top walls on this lattice).
fn impose_wall_values(field: &mut ScalarField, bc: &BoundarySet) -> Result<()> {
    let spec = *field.spec();
    let role = field.role();
    let m = spec.m;
    for edge in EDGES {
        if wall_offset(spec.layout, role, edge) != WallOffset::On {
            continue;
        }
        let cond = bc.condition(role, edge)?;
        let value = match cond {
            Condition::Dirichlet(v) => v,
            Condition::Neumann(_) => continue, // guarded against upstream
        };
        for k in 0..m {
            let (i, j) = match edge {
                Edge::Right => (m - 1, k),
                Edge::Top => (k, m - 1),
                Edge::Left => (0, k),
                Edge::Bottom => (k, 0),
            };
            let (x, y) = spec.node_coords(role, i, j)?;
            let s = match edge {
                Edge::Left | Edge::Right => y,
                Edge::Bottom | Edge::Top => x,
            };
            field.set(i, j, value.eval(s));
        }
    }
    Ok(())
}

fn require_no_slip_walls(scenario: &Scenario, bc: &BoundarySet) -> Result<()> {
    for role in [VariableRole::U, VariableRole::V] {
        for edge in EDGES {
            if !bc.condition(role, edge)?.is_dirichlet() {
                return Err(Error::UnsupportedCombination {
                    what: format!(
                        "the projection step folds wall velocities as no-slip values; \
                         the {} scenario prescribes a derivative condition on a velocity wall",
                        scenario.tag()
                    ),
                });
            }
        }
    }
    Ok(())
}

/// Advance one time step: explicit stress-divergence update, pressure
/// Poisson solve from the intermediate divergence, gradient correction,
/// and re-imposition of the wall velocities.
pub fn projection_step(
    state: &ProjectionState,
    scenario: &Scenario,
    force: &ForceField,
) -> Result<ProjectionState> {
    let spec = *state.u.spec();
    let m = spec.m;
    let dt = state.dt;
    let bc = scenario.boundary_conditions();
    require_no_slip_walls(scenario, &bc)?;
    let mu = scenario.viscosity();

    // step 1: intermediate velocity from viscosity and body force alone
    let (a1, a2) = stress_divergence(&state.u, &state.v, &mu, &spec)?;
    let mut us = ScalarField::zeros(spec, VariableRole::U);
    let mut vs = ScalarField::zeros(spec, VariableRole::V);
    for j in 0..m {
        for i in 0..m {
            let (x, y) = spec.node_coords(VariableRole::U, i, j)?;
            let (fx, fy) = force.at(x, y);
            us.set(i, j, state.u.at(i, j) + dt * (a1.at(i, j) + fx));
            vs.set(i, j, state.v.at(i, j) + dt * (a2.at(i, j) + fy));
        }
    }
    impose_wall_values(&mut us, &bc)?;
    impose_wall_values(&mut vs, &bc)?;

    // step 2: pressure from the divergence the correction must remove
    let div = proj_divergence(&us, &vs)?;
    let rhs = ScalarField::from_values(
        spec,
        VariableRole::P,
        div.values().iter().map(|d| d / dt).collect(),
    )?;
    let (p, pressure_residual) = poisson_solve(&spec, VariableRole::P, &bc, &rhs)?;

    // step 3: subtract the pressure gradient at every off-wall velocity node
    let mut u1 = us;
    let mut v1 = vs;
    for row in proj_gradient_rows(&spec)? {
        let (role, i, j) = row.target;
        let grad = row.apply(|_, pi, pj| p.at(pi, pj));
        match role {
            VariableRole::U => u1.set(i, j, u1.at(i, j) - dt * grad),
            VariableRole::V => v1.set(i, j, v1.at(i, j) - dt * grad),
            VariableRole::P => unreachable!("gradient rows target velocities"),
        }
    }
    impose_wall_values(&mut u1, &bc)?;
    impose_wall_values(&mut v1, &bc)?;

    Ok(ProjectionState {
        u: u1,
        v: v1,
        p,
        t: state.t + dt,
        dt,
        pressure_residual,
    })
}

/// Run the projection method from rest for `n_steps` steps.
pub fn solve_projection(
    scenario: &Scenario,
    m: usize,
    n_steps: usize,
    dt_policy: DtPolicy,
) -> Result<Solution> {
    let start = Instant::now();
    if n_steps == 0 {
        return Err(Error::ZeroSteps);
    }
    let spec = scenario.grid(m, Layout::ProjectionStaggered)?;
    let dt = match dt_policy {
        DtPolicy::DxSquared => spec.dx * spec.dx,
        DtPolicy::Explicit(dt) => dt,
    };
    let mut state = ProjectionState::initial(spec, dt)?;
    let force = scenario.force_field();
    let mut linear_residuals = Vec::with_capacity(n_steps);
    for _ in 0..n_steps {
        state = projection_step(&state, scenario, &force)?;
        linear_residuals.push(state.pressure_residual);
    }
    Ok(Solution {
        p: state.p,
        u: state.u,
        v: state.v,
        method_tag: "projection",
        m,
        wall_time: start.elapsed().as_secs_f64(),
        linear_residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{PipeParams, VesicleParams};

    fn vesicle() -> Scenario {
        Scenario::Vesicle(VesicleParams::defaults())
    }

    fn max_err(field: &ScalarField, exact: impl Fn(f64, f64) -> f64) -> f64 {
        let oracle = ScalarField::from_fn(*field.spec(), field.role(), exact);
        field.max_abs_diff(&oracle).unwrap()
    }

    #[test]
    fn rest_state_with_no_force_is_a_fixed_point() {
        let sc = vesicle();
        let spec = sc.grid(12, Layout::ProjectionStaggered).unwrap();
        let state = ProjectionState::initial(spec, spec.dx * spec.dx).unwrap();
        let next = projection_step(&state, &sc, &ForceField::zero()).unwrap();
        assert_eq!(next.u.max_abs(), 0.0);
        assert_eq!(next.v.max_abs(), 0.0);
        assert_eq!(next.p.max_abs(), 0.0);
        assert_eq!(next.t, state.dt);
    }

    #[test]
    fn divergence_of_a_solenoidal_field_vanishes() {
        let sc = vesicle();
        let spec = sc.grid(10, Layout::ProjectionStaggered).unwrap();
        // stream function (x-x0)^2 (y-y0)^2: both components vanish on the
        // left/bottom walls the operator folds through, and the compact
        // differences are exact on these products of quadratics
        let u = ScalarField::from_fn(spec, VariableRole::U, |x, y| {
            2.0 * (x - spec.x0).powi(2) * (y - spec.y0)
        });
        let v = ScalarField::from_fn(spec, VariableRole::V, |x, y| {
            -2.0 * (x - spec.x0) * (y - spec.y0).powi(2)
        });
        let div = proj_divergence(&u, &v).unwrap();
        assert!(div.max_abs() < 1e-10);
    }

    #[test]
    fn divergence_is_exact_for_quadratics_at_cell_centers() {
        let sc = vesicle();
        let spec = sc.grid(9, Layout::ProjectionStaggered).unwrap();
        let u = ScalarField::from_fn(spec, VariableRole::U, |x, y| {
            (x - spec.x0).powi(2) * (y - spec.y0)
        });
        let v = ScalarField::zeros(spec, VariableRole::V);
        let div = proj_divergence(&u, &v).unwrap();
        let exact = ScalarField::from_fn(spec, VariableRole::P, |x, y| {
            2.0 * (x - spec.x0) * (y - spec.y0)
        });
        assert!(div.max_abs_diff(&exact).unwrap() < 1e-10);
    }

    #[test]
    fn one_step_tracks_the_analytic_solution() {
        let sc = vesicle();
        let sol = solve_projection(&sc, 25, 1, DtPolicy::DxSquared).unwrap();
        assert!(max_err(&sol.p, |x, y| sc.analytic_at(x, y).unwrap().0) < 2e-2);
        assert!(max_err(&sol.u, |_, _| 0.0) < 1e-2);
        assert!(max_err(&sol.v, |_, _| 0.0) < 1e-2);
        let div = proj_divergence(&sol.u, &sol.v).unwrap();
        assert!(div.max_abs() < 1e-2);
        assert_eq!(sol.linear_residuals.len(), 1);
        assert_eq!(sol.method_tag, "projection");
    }

    #[test]
    fn rejects_bad_step_counts_and_time_steps() {
        let sc = vesicle();
        assert!(matches!(
            solve_projection(&sc, 10, 0, DtPolicy::DxSquared),
            Err(Error::ZeroSteps)
        ));
        for dt in [0.0, -1e-3, f64::NAN] {
            assert!(matches!(
                solve_projection(&sc, 10, 1, DtPolicy::Explicit(dt)),
                Err(Error::NonPositiveDt { .. })
            ));
        }
    }

    #[test]
    fn rejects_scenarios_without_no_slip_walls() {
        let sc = Scenario::Pipe(PipeParams::new(200.0, 100.0, 2.0).unwrap());
        assert!(matches!(
            solve_projection(&sc, 10, 1, DtPolicy::DxSquared),
            Err(Error::UnsupportedCombination { .. })
        ));
    }

    #[test]
    fn divergence_demands_the_shared_velocity_lattice() {
        let sc = vesicle();
        let mac = sc.grid(8, Layout::SaddleStaggered).unwrap();
        let u = ScalarField::zeros(mac, VariableRole::U);
        let v = ScalarField::zeros(mac, VariableRole::V);
        assert!(matches!(
            proj_divergence(&u, &v),
            Err(Error::WrongLayout { .. })
        ));
    }
}
