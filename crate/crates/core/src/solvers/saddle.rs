//! The coupled saddle-point solver: pressure and both velocity components
//! in one indefinite linear system.
//!
//! On the staggered grid, boundary conditions replace the continuity
//! equation at wall-adjacent pressure cells and the momentum equation at
//! on-wall velocity nodes; everywhere else stencil arms that would leave
//! the lattice are folded through the wall condition. On the collocated
//! grid every wall node carries a condition row and the interior uses wide
//! centered differences, which is exactly the combination that lets
//! odd/even pressure modes through.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::fd::{
    bc_claim_row, edge_slot, ghost_fold, inward_step, is_on_line, outward_step, pick_claim_edge,
    wall_offset, WallOffset, EDGES,
};
use crate::grid::{GridSpec, IndexMap, Layout, ScalarField, VariableRole};
use crate::scenarios::{BoundarySet, Condition, Edge, ForceField, Scenario};
use crate::sparse::{solve_linear, SparseMatrix, Triplet};
use crate::DEFAULT_TOL;

use super::{GridMode, Solution};

/// Triplet collector addressing unknowns by (role, i, j). Duplicate
/// coordinates are fine; assembly sums them.
struct SystemBuilder {
    imap: IndexMap,
    triplets: Vec<Triplet>,
    b: Vec<f64>,
}

impl SystemBuilder {
    fn new(spec: &GridSpec) -> Result<SystemBuilder> {
        let imap = IndexMap::build(
            spec,
            &[VariableRole::P, VariableRole::U, VariableRole::V],
        )?;
        let n = imap.len();
        Ok(SystemBuilder {
            imap,
            triplets: Vec::with_capacity(9 * n),
            b: vec![0.0; n],
        })
    }

    fn row(&self, role: VariableRole, i: usize, j: usize) -> Result<usize> {
        self.imap.index(role, i, j)
    }

    fn add(&mut self, r: usize, role: VariableRole, i: usize, j: usize, c: f64) -> Result<()> {
        if c != 0.0 {
            self.triplets.push(Triplet::new(r, self.imap.index(role, i, j)?, c));
        }
        Ok(())
    }

    /// Install a boundary claim row produced by the shared stencil builder.
    fn claim(&mut self, row: crate::fd::StencilRow) -> Result<()> {
        let (role, i, j) = row.target;
        let r = self.row(role, i, j)?;
        for ((er, ei, ej), c) in row.entries {
            self.add(r, er, ei, ej, c)?;
        }
        self.b[r] = row.rhs_shift;
        Ok(())
    }

    fn finish(self) -> Result<(SparseMatrix, Vec<f64>)> {
        let n = self.b.len();
        Ok((SparseMatrix::from_triplets(self.triplets, n, n)?, self.b))
    }
}

fn role_conditions<'a>(bc: &'a BoundarySet, role: VariableRole) -> Result<[&'a Condition; 4]> {
    Ok([
        bc.condition(role, Edge::Left)?,
        bc.condition(role, Edge::Right)?,
        bc.condition(role, Edge::Bottom)?,
        bc.condition(role, Edge::Top)?,
    ])
}

fn constant_viscosity(scenario: &Scenario) -> Result<f64> {
    scenario
        .viscosity()
        .constant_value()
        .ok_or(Error::VaryingViscosityUnsupported {
            method: "saddle-point",
        })
}

/// Momentum rows for one velocity component on the staggered grid:
/// mu lap(vel) - dp/daxis = -f_axis, with the compact two-cell pressure
/// gradient and wall folds on the viscous stencil.
fn staggered_momentum_rows(
    sys: &mut SystemBuilder,
    spec: &GridSpec,
    bc: &BoundarySet,
    vel: VariableRole,
    force: &ForceField,
    w: f64,
) -> Result<()> {
    let m = spec.m;
    let h = spec.dx;
    let conds = role_conditions(bc, vel)?;
    for j in 0..m {
        for i in 0..m {
            let on_edges: Vec<Edge> = EDGES
                .iter()
                .copied()
                .filter(|e| {
                    is_on_line(*e, i, j, m) && wall_offset(spec.layout, vel, *e) == WallOffset::On
                })
                .collect();
            if !on_edges.is_empty() {
                let e = pick_claim_edge(&on_edges, &conds);
                sys.claim(bc_claim_row(spec, vel, i, j, e, conds[edge_slot(e)])?)?;
                continue;
            }
            let r = sys.row(vel, i, j)?;
            // pressure gradient across the face this velocity lives on;
            // the momentum row carries it negated
            match vel {
                VariableRole::U => {
                    sys.add(r, VariableRole::P, i + 1, j, -1.0 / h)?;
                    sys.add(r, VariableRole::P, i, j, 1.0 / h)?;
                }
                VariableRole::V => {
                    sys.add(r, VariableRole::P, i, j + 1, -1.0 / h)?;
                    sys.add(r, VariableRole::P, i, j, 1.0 / h)?;
                }
                VariableRole::P => unreachable!("momentum rows are for velocities"),
            }
            // viscous 5-point stencil, folding arms that cross a wall
            let mut rhs_shift = 0.0;
            sys.add(r, vel, i, j, -4.0 * w)?;
            for e in EDGES {
                let (oi, oj) = outward_step(e);
                let (ni, nj) = (i as isize + oi, j as isize + oj);
                if ni >= 0 && nj >= 0 && (ni as usize) < m && (nj as usize) < m {
                    sys.add(r, vel, ni as usize, nj as usize, w)?;
                } else {
                    let off = wall_offset(spec.layout, vel, e);
                    let s = crate::fd::along_coord(spec, vel, e, i, j)?;
                    let fold = ghost_fold(off, conds[edge_slot(e)], w, h, s);
                    sys.add(r, vel, i, j, fold.target_add)?;
                    let (ii, ij) = inward_step(e);
                    sys.add(
                        r,
                        vel,
                        (i as isize + ii) as usize,
                        (j as isize + ij) as usize,
                        fold.inward_add,
                    )?;
                    rhs_shift += fold.rhs_shift_add;
                }
            }
            let (x, y) = spec.node_coords(vel, i, j)?;
            let (f1, f2) = force.at(x, y);
            let f_axis = if vel == VariableRole::U { f1 } else { f2 };
            sys.b[r] = rhs_shift - f_axis;
        }
    }
    Ok(())
}

fn assemble_staggered(scenario: &Scenario, m: usize) -> Result<(SparseMatrix, Vec<f64>, GridSpec)> {
    let spec = scenario.grid(m, Layout::SaddleStaggered)?;
    let mu = constant_viscosity(scenario)?;
    let bc = scenario.boundary_conditions();
    let force = scenario.force_field();
    let h = spec.dx;
    let w = mu / (h * h);
    let mut sys = SystemBuilder::new(&spec)?;

    // pressure rows: cells bordering a wall take the boundary condition,
    // interior cells the four-face divergence
    let conds_p = role_conditions(&bc, VariableRole::P)?;
    for j in 0..m {
        for i in 0..m {
            let bordered: Vec<Edge> = EDGES
                .iter()
                .copied()
                .filter(|e| is_on_line(*e, i, j, m))
                .collect();
            if !bordered.is_empty() {
                let e = pick_claim_edge(&bordered, &conds_p);
                sys.claim(bc_claim_row(
                    &spec,
                    VariableRole::P,
                    i,
                    j,
                    e,
                    conds_p[edge_slot(e)],
                )?)?;
            } else {
                let r = sys.row(VariableRole::P, i, j)?;
                sys.add(r, VariableRole::U, i, j, 1.0 / h)?;
                sys.add(r, VariableRole::U, i - 1, j, -1.0 / h)?;
                sys.add(r, VariableRole::V, i, j, 1.0 / h)?;
                sys.add(r, VariableRole::V, i, j - 1, -1.0 / h)?;
            }
        }
    }

    staggered_momentum_rows(&mut sys, &spec, &bc, VariableRole::U, &force, w)?;
    staggered_momentum_rows(&mut sys, &spec, &bc, VariableRole::V, &force, w)?;
    let (a, b) = sys.finish()?;
    Ok((a, b, spec))
}

pub(super) fn assemble_collocated(
    scenario: &Scenario,
    m: usize,
) -> Result<(SparseMatrix, Vec<f64>, GridSpec)> {
    let spec = scenario.grid(m, Layout::Collocated)?;
    let mu = constant_viscosity(scenario)?;
    let bc = scenario.boundary_conditions();
    let force = scenario.force_field();
    let h = spec.dx;
    let w = mu / (h * h);
    let wide = 1.0 / (2.0 * h);
    let mut sys = SystemBuilder::new(&spec)?;

    for role in [VariableRole::P, VariableRole::U, VariableRole::V] {
        let conds = role_conditions(&bc, role)?;
        for j in 0..m {
            for i in 0..m {
                // every wall node is on-lattice here and takes its condition
                let on_edges: Vec<Edge> = EDGES
                    .iter()
                    .copied()
                    .filter(|e| is_on_line(*e, i, j, m))
                    .collect();
                if !on_edges.is_empty() {
                    let e = pick_claim_edge(&on_edges, &conds);
                    sys.claim(bc_claim_row(&spec, role, i, j, e, conds[edge_slot(e)])?)?;
                    continue;
                }
                let r = sys.row(role, i, j)?;
                match role {
                    VariableRole::P => {
                        // wide centered divergence: the step that skips
                        // adjacent nodes and invites the checkerboard
                        sys.add(r, VariableRole::U, i + 1, j, wide)?;
                        sys.add(r, VariableRole::U, i - 1, j, -wide)?;
                        sys.add(r, VariableRole::V, i, j + 1, wide)?;
                        sys.add(r, VariableRole::V, i, j - 1, -wide)?;
                    }
                    vel => {
                        if vel == VariableRole::U {
                            sys.add(r, VariableRole::P, i + 1, j, -wide)?;
                            sys.add(r, VariableRole::P, i - 1, j, wide)?;
                        } else {
                            sys.add(r, VariableRole::P, i, j + 1, -wide)?;
                            sys.add(r, VariableRole::P, i, j - 1, wide)?;
                        }
                        sys.add(r, vel, i, j, -4.0 * w)?;
                        sys.add(r, vel, i + 1, j, w)?;
                        sys.add(r, vel, i - 1, j, w)?;
                        sys.add(r, vel, i, j + 1, w)?;
                        sys.add(r, vel, i, j - 1, w)?;
                        let (x, y) = spec.node_coords(vel, i, j)?;
                        let (f1, f2) = force.at(x, y);
                        sys.b[r] = if vel == VariableRole::U { -f1 } else { -f2 };
                    }
                }
            }
        }
    }
    let (a, b) = sys.finish()?;
    Ok((a, b, spec))
}

/// Solve the full coupled system for `scenario` at resolution `m`.
///
/// Requires spatially constant viscosity; the varying-viscosity route is
/// the projection method.
pub fn solve_saddle_point(scenario: &Scenario, m: usize, mode: GridMode) -> Result<Solution> {
    let start = Instant::now();
    let (a, b, spec) = match mode {
        GridMode::Staggered => assemble_staggered(scenario, m)?,
        GridMode::Collocated => assemble_collocated(scenario, m)?,
    };
    let report = solve_linear(&a, &b, DEFAULT_TOL)?;
    let n = m * m;
    let x = report.solution;
    let p = ScalarField::from_values(spec, VariableRole::P, x[..n].to_vec())?;
    let u = ScalarField::from_values(spec, VariableRole::U, x[n..2 * n].to_vec())?;
    let v = ScalarField::from_values(spec, VariableRole::V, x[2 * n..].to_vec())?;
    Ok(Solution {
        p,
        u,
        v,
        method_tag: "saddle-point",
        m,
        wall_time: start.elapsed().as_secs_f64(),
        linear_residuals: vec![report.relative_residual],
    })
}
