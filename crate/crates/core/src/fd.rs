//! Finite-difference stencils.
//!
//! Three families live here: classical 3-point formulas on a line, staggered
//! half-cell gradient/divergence rows, and the diagonally averaged four-point
//! rows used on the grid where u and v share a lattice. Boundary conditions
//! enter either as claim rows (the condition replaces the equation at a node)
//! or as ghost folds (an out-of-lattice stencil reference is eliminated
//! through the condition and lands in `rhs_shift`).

use crate::error::{Error, Result};
use crate::grid::{GridSpec, Layout, ScalarField, VariableRole};
use crate::scenarios::{BoundarySet, Condition, Edge};
use crate::sparse::{SparseMatrix, Triplet};
use std::sync::Arc;

/// Which way a one-sided formula reaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Weights of the centered first derivative on nodes (t-h, t, t+h).
/// Exact for polynomials of degree <= 2.
pub fn centered_first(h: f64) -> [f64; 3] {
    assert!(h > 0.0, "spacing must be positive");
    [-0.5 / h, 0.0, 0.5 / h]
}

/// Weights of the centered second derivative on nodes (t-h, t, t+h).
/// Exact for polynomials of degree <= 3.
pub fn centered_second(h: f64) -> [f64; 3] {
    assert!(h > 0.0, "spacing must be positive");
    let w = 1.0 / (h * h);
    [w, -2.0 * w, w]
}

/// Weights of the 3-point one-sided first derivative. Forward weights apply
/// to nodes (t, t+h, t+2h), backward to (t, t-h, t-2h). Exact for degree <= 2.
pub fn onesided_first(h: f64, direction: Direction) -> [f64; 3] {
    assert!(h > 0.0, "spacing must be positive");
    match direction {
        Direction::Forward => [-1.5 / h, 2.0 / h, -0.5 / h],
        Direction::Backward => [1.5 / h, -2.0 / h, 0.5 / h],
    }
}

/// One assembled matrix row over grid unknowns.
///
/// The row states sum(coeff * x[node]) = rhs + rhs_shift, where rhs is the
/// natural right-hand side of the equation the row discretizes (a source
/// term, or the operator value when the row is used as an evaluator).
/// Boundary data referenced by the stencil is already folded into
/// `rhs_shift`. Rows with `replaces_equation` impose a boundary condition
/// in place of the operator at their target: their complete right-hand side
/// is `rhs_shift` alone and no source term may be added.
#[derive(Clone, Debug)]
pub struct StencilRow {
    pub target: (VariableRole, usize, usize),
    pub entries: Vec<((VariableRole, usize, usize), f64)>,
    pub rhs_shift: f64,
    pub replaces_equation: bool,
}

impl StencilRow {
    /// Evaluate sum(coeff * field) - rhs_shift: the discrete operator value
    /// this row represents when applied to known fields.
    pub fn apply(&self, field: impl Fn(VariableRole, usize, usize) -> f64) -> f64 {
        let s: f64 = self
            .entries
            .iter()
            .map(|((r, i, j), c)| c * field(*r, *i, *j))
            .sum();
        s - self.rhs_shift
    }
}

/// Dynamic viscosity over the domain, with the spatially constant case
/// distinguished so solvers limited to constant viscosity can detect it.
#[derive(Clone)]
pub struct ViscosityField {
    eval: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    constant: Option<f64>,
}

impl ViscosityField {
    pub fn constant(mu: f64) -> Result<ViscosityField> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::NonPositiveConstantViscosity { mu });
        }
        Ok(ViscosityField {
            eval: Arc::new(move |_, _| mu),
            constant: Some(mu),
        })
    }

    pub fn varying(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> ViscosityField {
        ViscosityField {
            eval: Arc::new(f),
            constant: None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant.is_some()
    }

    /// The uniform value, if the field is spatially constant.
    pub fn constant_value(&self) -> Option<f64> {
        self.constant
    }

    /// Sample the field; positivity is enforced at every sample point.
    pub fn at(&self, x: f64, y: f64) -> Result<f64> {
        let mu = (self.eval)(x, y);
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::NonPositiveViscosity { mu, x, y });
        }
        Ok(mu)
    }
}

impl std::fmt::Debug for ViscosityField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.constant {
            Some(mu) => write!(f, "ViscosityField::constant({mu})"),
            None => write!(f, "ViscosityField::varying(..)"),
        }
    }
}

/// Edges in claim-precedence order.
pub(crate) const EDGES: [Edge; 4] = [Edge::Left, Edge::Right, Edge::Bottom, Edge::Top];

/// Distance class of a role's outermost lattice line from a wall, in units
/// of the spacing: on the wall, half a cell in, or a full cell in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum WallOffset {
    On,
    Half,
    Full,
}

pub(crate) fn wall_offset(layout: Layout, role: VariableRole, edge: Edge) -> WallOffset {
    use Layout::*;
    use VariableRole::*;
    use WallOffset::*;
    match layout {
        Collocated => On,
        SaddleStaggered => match (role, edge) {
            (P, _) => Half,
            (U, Edge::Left) => Full,
            (U, Edge::Right) => On,
            (U, _) => Half,
            (V, Edge::Bottom) => Full,
            (V, Edge::Top) => On,
            (V, _) => Half,
        },
        ProjectionStaggered => match (role, edge) {
            (P, _) => Half,
            (_, Edge::Left | Edge::Bottom) => Full,
            (_, Edge::Right | Edge::Top) => On,
        },
    }
}

pub(crate) fn edge_slot(edge: Edge) -> usize {
    match edge {
        Edge::Left => 0,
        Edge::Right => 1,
        Edge::Bottom => 2,
        Edge::Top => 3,
    }
}

/// Does lattice node (i, j) sit on the outermost line toward this edge?
pub(crate) fn is_on_line(edge: Edge, i: usize, j: usize, m: usize) -> bool {
    match edge {
        Edge::Left => i == 0,
        Edge::Right => i == m - 1,
        Edge::Bottom => j == 0,
        Edge::Top => j == m - 1,
    }
}

pub(crate) fn outward_step(edge: Edge) -> (isize, isize) {
    match edge {
        Edge::Left => (-1, 0),
        Edge::Right => (1, 0),
        Edge::Bottom => (0, -1),
        Edge::Top => (0, 1),
    }
}

pub(crate) fn inward_step(edge: Edge) -> (isize, isize) {
    let (x, y) = outward_step(edge);
    (-x, -y)
}

/// The along-edge coordinate at which a node's boundary data is evaluated:
/// y for the vertical walls, x for the horizontal ones.
pub(crate) fn along_coord(
    spec: &GridSpec,
    role: VariableRole,
    edge: Edge,
    i: usize,
    j: usize,
) -> Result<f64> {
    let (x, y) = spec.node_coords(role, i, j)?;
    Ok(match edge {
        Edge::Left | Edge::Right => y,
        Edge::Bottom | Edge::Top => x,
    })
}

/// Coefficients extrapolating a wall value from the three nodes nearest the
/// wall, by distance class of the nearest node. Exact through quadratics.
fn dirichlet_claim_coeffs(offset: WallOffset) -> [f64; 3] {
    match offset {
        WallOffset::On => [1.0, 0.0, 0.0],
        WallOffset::Half => [15.0 / 8.0, -5.0 / 4.0, 3.0 / 8.0],
        WallOffset::Full => [3.0, -3.0, 1.0],
    }
}

/// Coefficients for the inward-pointing wall derivative from the three
/// nearest nodes. Exact through quadratics. The inward derivative is the
/// negative of the outward-normal derivative the condition prescribes.
fn neumann_claim_coeffs(offset: WallOffset, h: f64) -> [f64; 3] {
    match offset {
        WallOffset::On => [-1.5 / h, 2.0 / h, -0.5 / h],
        WallOffset::Half => [-2.0 / h, 3.0 / h, -1.0 / h],
        WallOffset::Full => [-2.5 / h, 4.0 / h, -1.5 / h],
    }
}

/// Build the claim row imposing `cond` at node (i, j) toward `edge`.
///
/// Dirichlet rows state extrapolated_wall_value = value; Neumann rows state
/// inward_derivative = -outward_value. Both are exact through quadratics.
pub(crate) fn bc_claim_row(
    spec: &GridSpec,
    role: VariableRole,
    i: usize,
    j: usize,
    edge: Edge,
    cond: &Condition,
) -> Result<StencilRow> {
    let offset = wall_offset(spec.layout, role, edge);
    let s = along_coord(spec, role, edge, i, j)?;
    let (coeffs, rhs_shift) = match cond {
        Condition::Dirichlet(v) => (dirichlet_claim_coeffs(offset), v.eval(s)),
        Condition::Neumann(g) => (neumann_claim_coeffs(offset, spec.dx), -g.eval(s)),
    };
    let (si, sj) = inward_step(edge);
    let mut entries = Vec::with_capacity(3);
    for (k, c) in coeffs.iter().enumerate() {
        if *c != 0.0 {
            let ni = (i as isize + si * k as isize) as usize;
            let nj = (j as isize + sj * k as isize) as usize;
            entries.push(((role, ni, nj), *c));
        }
    }
    Ok(StencilRow {
        target: (role, i, j),
        entries,
        rhs_shift,
        replaces_equation: true,
    })
}

/// How folding one ghost reference of weight `w` modifies a row: additions to
/// the target node, to the node one step further inward, and to rhs_shift.
pub(crate) struct GhostFold {
    pub target_add: f64,
    pub inward_add: f64,
    pub rhs_shift_add: f64,
}

/// Eliminate a stencil reference that falls outside the lattice past a wall.
///
/// `offset` is the target node's distance class from that wall (the ghost
/// mirrors it: half a cell outside, or exactly on the wall). The ghost value
/// is expressed through the boundary condition to quadratic accuracy and the
/// known part moves to the right-hand side. `s` is the along-edge coordinate
/// where the condition is evaluated; `w` the ghost's stencil weight.
pub(crate) fn ghost_fold(offset: WallOffset, cond: &Condition, w: f64, h: f64, s: f64) -> GhostFold {
    match (offset, cond) {
        // ghost = (8/3) V - 2 a + a2/3  (quadratic through wall value V)
        (WallOffset::Half, Condition::Dirichlet(v)) => GhostFold {
            target_add: -2.0 * w,
            inward_add: w / 3.0,
            rhs_shift_add: -(8.0 / 3.0) * w * v.eval(s),
        },
        // ghost sits on the wall itself
        (WallOffset::Full, Condition::Dirichlet(v)) => GhostFold {
            target_add: 0.0,
            inward_add: 0.0,
            rhs_shift_add: -w * v.eval(s),
        },
        // ghost = a + h g_n  (centered derivative across the wall)
        (WallOffset::Half, Condition::Neumann(g)) => GhostFold {
            target_add: w,
            inward_add: 0.0,
            rhs_shift_add: -w * h * g.eval(s),
        },
        // on-wall ghost from the one-sided derivative:
        // ghost = (4 a - a2 + 2 h g_n) / 3
        (WallOffset::Full, Condition::Neumann(g)) => GhostFold {
            target_add: 4.0 * w / 3.0,
            inward_add: -w / 3.0,
            rhs_shift_add: -(2.0 / 3.0) * w * h * g.eval(s),
        },
        (WallOffset::On, _) => unreachable!("on-wall nodes take claim rows, not ghost folds"),
    }
}

/// Among the edges whose wall a node sits on, pick the one whose condition
/// claims the node: Dirichlet wins over Neumann, ties break in
/// left, right, bottom, top order.
pub(crate) fn pick_claim_edge(on_edges: &[Edge], conds: &[&Condition; 4]) -> Edge {
    for e in on_edges {
        if matches!(conds[edge_slot(*e)], Condition::Dirichlet(_)) {
            return *e;
        }
    }
    on_edges[0]
}

struct RowAccumulator {
    target: (VariableRole, usize, usize),
    entries: Vec<((VariableRole, usize, usize), f64)>,
}

impl RowAccumulator {
    fn new(target: (VariableRole, usize, usize)) -> RowAccumulator {
        RowAccumulator {
            target,
            entries: Vec::with_capacity(5),
        }
    }

    fn add(&mut self, node: (VariableRole, usize, usize), c: f64) {
        if c == 0.0 {
            return;
        }
        if let Some(e) = self.entries.iter_mut().find(|(n, _)| *n == node) {
            e.1 += c;
        } else {
            self.entries.push((node, c));
        }
    }

    fn finish(self, rhs_shift: f64, replaces_equation: bool) -> StencilRow {
        StencilRow {
            target: self.target,
            entries: self.entries,
            rhs_shift,
            replaces_equation,
        }
    }
}

/// 5-point Laplacian rows for one variable with its boundary conditions
/// realized: nodes on a wall take claim rows, stencil arms that leave the
/// lattice fold through the wall condition. Rows come back in x-fastest
/// node order, one per lattice node.
pub fn laplacian_rows(
    spec: &GridSpec,
    role: VariableRole,
    bc: &BoundarySet,
) -> Result<Vec<StencilRow>> {
    let m = spec.m;
    let h = spec.dx;
    let w = 1.0 / (h * h);
    let conds: [&Condition; 4] = [
        bc.condition(role, Edge::Left)?,
        bc.condition(role, Edge::Right)?,
        bc.condition(role, Edge::Bottom)?,
        bc.condition(role, Edge::Top)?,
    ];
    let mut rows = Vec::with_capacity(m * m);
    for j in 0..m {
        for i in 0..m {
            let on_edges: Vec<Edge> = EDGES
                .iter()
                .copied()
                .filter(|e| {
                    is_on_line(*e, i, j, m) && wall_offset(spec.layout, role, *e) == WallOffset::On
                })
                .collect();
            if !on_edges.is_empty() {
                let e = pick_claim_edge(&on_edges, &conds);
                rows.push(bc_claim_row(spec, role, i, j, e, conds[edge_slot(e)])?);
                continue;
            }
            let mut acc = RowAccumulator::new((role, i, j));
            acc.add((role, i, j), -4.0 * w);
            let mut rhs_shift = 0.0;
            for e in EDGES {
                let (oi, oj) = outward_step(e);
                let ni = i as isize + oi;
                let nj = j as isize + oj;
                if ni >= 0 && nj >= 0 && (ni as usize) < m && (nj as usize) < m {
                    acc.add((role, ni as usize, nj as usize), w);
                } else {
                    let off = wall_offset(spec.layout, role, e);
                    let s = along_coord(spec, role, e, i, j)?;
                    let fold = ghost_fold(off, conds[edge_slot(e)], w, h, s);
                    acc.add((role, i, j), fold.target_add);
                    let (ii, ij) = inward_step(e);
                    acc.add(
                        (role, (i as isize + ii) as usize, (j as isize + ij) as usize),
                        fold.inward_add,
                    );
                    rhs_shift += fold.rhs_shift_add;
                }
            }
            rows.push(acc.finish(rhs_shift, false));
        }
    }
    Ok(rows)
}

fn require_layout(spec: &GridSpec, expected: Layout) -> Result<()> {
    if spec.layout != expected {
        return Err(Error::WrongLayout {
            expected,
            got: spec.layout,
        });
    }
    Ok(())
}

/// Half-cell pressure-gradient rows on the face-staggered grid: p_x at each
/// u node from the two cells it separates, p_y at each v node likewise.
/// Nodes on the right wall (u) and top wall (v) have no gradient row; the
/// coupled solver claims those for boundary conditions.
pub fn mac_gradient_rows(spec: &GridSpec) -> Result<Vec<StencilRow>> {
    require_layout(spec, Layout::SaddleStaggered)?;
    let m = spec.m;
    let c = 1.0 / spec.dx;
    let mut rows = Vec::with_capacity(2 * m * (m - 1));
    for j in 0..m {
        for i in 0..m - 1 {
            rows.push(StencilRow {
                target: (VariableRole::U, i, j),
                entries: vec![
                    ((VariableRole::P, i + 1, j), c),
                    ((VariableRole::P, i, j), -c),
                ],
                rhs_shift: 0.0,
                replaces_equation: false,
            });
        }
    }
    for j in 0..m - 1 {
        for i in 0..m {
            rows.push(StencilRow {
                target: (VariableRole::V, i, j),
                entries: vec![
                    ((VariableRole::P, i, j + 1), c),
                    ((VariableRole::P, i, j), -c),
                ],
                rhs_shift: 0.0,
                replaces_equation: false,
            });
        }
    }
    Ok(rows)
}

/// Half-cell divergence rows at cell centers on the face-staggered grid,
/// for the cells whose four face velocities all exist on the lattice
/// (i, j >= 1; the outermost cells reference wall data instead and are
/// handled by the solvers' boundary rows).
pub fn mac_divergence_rows(spec: &GridSpec) -> Result<Vec<StencilRow>> {
    require_layout(spec, Layout::SaddleStaggered)?;
    let m = spec.m;
    let c = 1.0 / spec.dx;
    let mut rows = Vec::with_capacity((m - 1) * (m - 1));
    for j in 1..m {
        for i in 1..m {
            rows.push(StencilRow {
                target: (VariableRole::P, i, j),
                entries: vec![
                    ((VariableRole::U, i, j), c),
                    ((VariableRole::U, i - 1, j), -c),
                    ((VariableRole::V, i, j), c),
                    ((VariableRole::V, i, j - 1), -c),
                ],
                rhs_shift: 0.0,
                replaces_equation: false,
            });
        }
    }
    Ok(rows)
}

/// Four-point pressure-gradient rows where u and v share one lattice: each
/// velocity node averages the two half-cell differences of the p cells
/// diagonally around it. Rows target (U, i, j) for p_x and (V, i, j) for
/// p_y, for the velocity nodes not on the right/top walls.
pub fn proj_gradient_rows(spec: &GridSpec) -> Result<Vec<StencilRow>> {
    require_layout(spec, Layout::ProjectionStaggered)?;
    let m = spec.m;
    let c = 0.5 / spec.dx;
    let mut rows = Vec::with_capacity(2 * (m - 1) * (m - 1));
    for j in 0..m - 1 {
        for i in 0..m - 1 {
            rows.push(StencilRow {
                target: (VariableRole::U, i, j),
                entries: vec![
                    ((VariableRole::P, i + 1, j + 1), c),
                    ((VariableRole::P, i, j + 1), -c),
                    ((VariableRole::P, i + 1, j), c),
                    ((VariableRole::P, i, j), -c),
                ],
                rhs_shift: 0.0,
                replaces_equation: false,
            });
            rows.push(StencilRow {
                target: (VariableRole::V, i, j),
                entries: vec![
                    ((VariableRole::P, i + 1, j + 1), c),
                    ((VariableRole::P, i + 1, j), -c),
                    ((VariableRole::P, i, j + 1), c),
                    ((VariableRole::P, i, j), -c),
                ],
                rhs_shift: 0.0,
                replaces_equation: false,
            });
        }
    }
    Ok(rows)
}

/// Four-point divergence rows at p cells from the velocity nodes diagonally
/// around them, for cells whose four corners are all lattice nodes
/// (i, j >= 1; cells along the left/bottom walls reference wall velocities
/// and are handled by the solvers).
pub fn proj_divergence_rows(spec: &GridSpec) -> Result<Vec<StencilRow>> {
    require_layout(spec, Layout::ProjectionStaggered)?;
    let m = spec.m;
    let c = 0.5 / spec.dx;
    let mut rows = Vec::with_capacity((m - 1) * (m - 1));
    for j in 1..m {
        for i in 1..m {
            rows.push(StencilRow {
                target: (VariableRole::P, i, j),
                entries: vec![
                    ((VariableRole::U, i, j), c),
                    ((VariableRole::U, i - 1, j), -c),
                    ((VariableRole::U, i, j - 1), c),
                    ((VariableRole::U, i - 1, j - 1), -c),
                    ((VariableRole::V, i, j), c),
                    ((VariableRole::V, i, j - 1), -c),
                    ((VariableRole::V, i - 1, j), c),
                    ((VariableRole::V, i - 1, j - 1), -c),
                ],
                rhs_shift: 0.0,
                replaces_equation: false,
            });
        }
    }
    Ok(rows)
}

/// Assemble a Poisson problem (Laplacian of `role` = `rhs`) into a sparse
/// system, honoring claim rows' ownership of their right-hand side.
pub fn assemble_poisson(
    spec: &GridSpec,
    role: VariableRole,
    bc: &BoundarySet,
    rhs: &ScalarField,
) -> Result<(SparseMatrix, Vec<f64>)> {
    if rhs.m() != spec.m {
        return Err(Error::DimensionMismatch {
            what: "poisson right-hand side resolution",
            expected: spec.m,
            got: rhs.m(),
        });
    }
    let m = spec.m;
    let n = m * m;
    let rows = laplacian_rows(spec, role, bc)?;
    let mut triplets = Vec::with_capacity(5 * n);
    let mut b = vec![0.0; n];
    for row in &rows {
        let (_, ti, tj) = row.target;
        let r = tj * m + ti;
        for ((_, i, j), c) in &row.entries {
            triplets.push(Triplet::new(r, j * m + i, *c));
        }
        b[r] = row.rhs_shift + if row.replaces_equation { 0.0 } else { rhs.at(ti, tj) };
    }
    let a = SparseMatrix::from_triplets(triplets, n, n)?;
    Ok((a, b))
}

/// Divergence of the viscous stress, componentwise:
/// a1 = (2 mu u_x)_x + (mu (u_y + v_x))_y and
/// a2 = (mu (u_y + v_x))_x + (2 mu v_y)_y,
/// with each outer derivative a centered difference of half-node fluxes and
/// mu sampled at the flux midpoints.
///
/// Defined on the shared velocity lattice. References one step past the
/// left/bottom walls take a zero wall velocity (no-slip); output rows on the
/// right/top walls, where solvers re-impose boundary values, stay zero.
pub fn stress_divergence(
    u: &ScalarField,
    v: &ScalarField,
    mu: &ViscosityField,
    spec: &GridSpec,
) -> Result<(ScalarField, ScalarField)> {
    require_layout(spec, Layout::ProjectionStaggered)?;
    for f in [u, v] {
        if f.m() != spec.m {
            return Err(Error::DimensionMismatch {
                what: "velocity field resolution",
                expected: spec.m,
                got: f.m(),
            });
        }
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
    // averaged cross derivatives at the midpoint between two lattice rows
    // (columns), exact for quadratics
    let vx_mid = |i: isize, jlo: isize| -> f64 {
        (at(v, i + 1, jlo) - at(v, i - 1, jlo) + at(v, i + 1, jlo + 1) - at(v, i - 1, jlo + 1))
            / (4.0 * h)
    };
    let uy_mid = |ilo: isize, j: isize| -> f64 {
        (at(u, ilo, j + 1) - at(u, ilo, j - 1) + at(u, ilo + 1, j + 1) - at(u, ilo + 1, j - 1))
            / (4.0 * h)
    };
    let mut a1 = ScalarField::zeros(*spec, VariableRole::U);
    let mut a2 = ScalarField::zeros(*spec, VariableRole::V);
    for j in 0..m - 1 {
        for i in 0..m - 1 {
            let (x, y) = spec.node_coords(VariableRole::U, i, j)?;
            let mu_r = mu.at(x + 0.5 * h, y)?;
            let mu_l = mu.at(x - 0.5 * h, y)?;
            let mu_t = mu.at(x, y + 0.5 * h)?;
            let mu_b = mu.at(x, y - 0.5 * h)?;
            let (iz, jz) = (i as isize, j as isize);
            let uc = at(u, iz, jz);
            let vc = at(v, iz, jz);

            let t1 = (2.0 * mu_r * (at(u, iz + 1, jz) - uc) - 2.0 * mu_l * (uc - at(u, iz - 1, jz)))
                / (h * h);
            let fy_t = mu_t * ((at(u, iz, jz + 1) - uc) / h + vx_mid(iz, jz));
            let fy_b = mu_b * ((uc - at(u, iz, jz - 1)) / h + vx_mid(iz, jz - 1));
            a1.set(i, j, t1 + (fy_t - fy_b) / h);

            let s1 = (2.0 * mu_t * (at(v, iz, jz + 1) - vc) - 2.0 * mu_b * (vc - at(v, iz, jz - 1)))
                / (h * h);
            let fx_r = mu_r * (uy_mid(iz, jz) + (at(v, iz + 1, jz) - vc) / h);
            let fx_l = mu_l * (uy_mid(iz - 1, jz) + (vc - at(v, iz - 1, jz)) / h);
            a2.set(i, j, s1 + (fx_r - fx_l) / h);
        }
    }
    Ok((a1, a2))
}
