//! The decoupling solver: with constant viscosity the pressure satisfies
//! its own Poisson equation (the divergence of the momentum balance), and
//! each velocity component then satisfies a Poisson equation driven by the
//! solved pressure gradient. Three sequential scalar solves replace the one
//! coupled system.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::fd::mac_gradient_rows;
use crate::grid::{Layout, ScalarField, VariableRole};
use crate::scenarios::Scenario;

use super::{poisson_solve, Solution};

/// d/dx sampled on a line of M values: centered inside, one-sided
/// three-point at the ends, all second order.
fn line_derivative(f: impl Fn(isize) -> f64, i: usize, m: usize, h: f64) -> f64 {
    let i = i as isize;
    if i == 0 {
        (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h)
    } else if i == m as isize - 1 {
        (3.0 * f(i) - 4.0 * f(i - 1) + f(i - 2)) / (2.0 * h)
    } else {
        (f(i + 1) - f(i - 1)) / (2.0 * h)
    }
}

/// Solve `scenario` at resolution `m` by the three decoupled Poisson
/// problems. Rejects spatially varying viscosity, which re-couples the
/// equations.
pub fn solve_decoupling(scenario: &Scenario, m: usize) -> Result<Solution> {
    let start = Instant::now();
    let mu = scenario
        .viscosity()
        .constant_value()
        .ok_or(Error::VaryingViscosityUnsupported {
            method: "decoupling",
        })?;
    let spec = scenario.grid(m, Layout::SaddleStaggered)?;
    let bc = scenario.boundary_conditions();
    let force = scenario.force_field();
    let h = spec.dx;

    // pressure equation: lap p = div f, force sampled at the pressure cells
    let f1 = ScalarField::from_fn(spec, VariableRole::P, |x, y| force.at(x, y).0);
    let f2 = ScalarField::from_fn(spec, VariableRole::P, |x, y| force.at(x, y).1);
    let mut rhs_p = ScalarField::zeros(spec, VariableRole::P);
    for j in 0..m {
        for i in 0..m {
            let d1 = line_derivative(|k| f1.at(k as usize, j), i, m, h);
            let d2 = line_derivative(|k| f2.at(i, k as usize), j, m, h);
            rhs_p.set(i, j, d1 + d2);
        }
    }
    let (p, res_p) = poisson_solve(&spec, VariableRole::P, &bc, &rhs_p)?;

    // velocity equations: lap vel = (dp/daxis - f_axis) / mu, the gradient
    // taken between the two cells each face separates; on-wall faces are
    // claimed by their boundary rows, so their right-hand side is unused
    let mut rhs_u = ScalarField::zeros(spec, VariableRole::U);
    let mut rhs_v = ScalarField::zeros(spec, VariableRole::V);
    for row in mac_gradient_rows(&spec)? {
        let (role, i, j) = row.target;
        let grad = row.apply(|_, pi, pj| p.at(pi, pj));
        let (x, y) = spec.node_coords(role, i, j)?;
        let (fx, fy) = force.at(x, y);
        match role {
            VariableRole::U => rhs_u.set(i, j, (grad - fx) / mu),
            VariableRole::V => rhs_v.set(i, j, (grad - fy) / mu),
            VariableRole::P => unreachable!("gradient rows target velocities"),
        }
    }
    let (u, res_u) = poisson_solve(&spec, VariableRole::U, &bc, &rhs_u)?;
    let (v, res_v) = poisson_solve(&spec, VariableRole::V, &bc, &rhs_v)?;

    Ok(Solution {
        p,
        u,
        v,
        method_tag: "decoupling",
        m,
        wall_time: start.elapsed().as_secs_f64(),
        linear_residuals: vec![res_p, res_u, res_v],
    })
}
