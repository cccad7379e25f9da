//! Problem definitions: boundary conditions, body forces, viscosity, and the
//! closed-form solutions the solvers are checked against.
//!
//! Two benchmark scenarios are built in. Pressure-driven pipe flow on the
//! unit square has a linear pressure drop and a parabolic horizontal
//! velocity. The vesicle scenario immerses a circular membrane in a 20x20
//! box via a mollified-delta normal force; at constant viscosity its exact
//! velocity is zero and its pressure is a smoothed step of depth 1/R.

use crate::error::{Error, Result};
use crate::fd::ViscosityField;
use crate::grid::{GridSpec, Layout, VariableRole};
use std::sync::Arc;

/// A value prescribed along one edge, constant or varying with the
/// along-edge coordinate (y on the vertical walls, x on the horizontal).
#[derive(Clone)]
pub enum EdgeValue {
    Const(f64),
    Fn(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl EdgeValue {
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            EdgeValue::Const(v) => *v,
            EdgeValue::Fn(f) => f(s),
        }
    }
}

impl std::fmt::Debug for EdgeValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EdgeValue::Const(v) => write!(f, "Const({v})"),
            EdgeValue::Fn(_) => write!(f, "Fn(..)"),
        }
    }
}

/// Boundary condition on one edge for one variable. Neumann values are
/// outward-normal derivatives.
#[derive(Clone, Debug)]
pub enum Condition {
    Dirichlet(EdgeValue),
    Neumann(EdgeValue),
}

impl Condition {
    pub fn dirichlet(v: f64) -> Condition {
        Condition::Dirichlet(EdgeValue::Const(v))
    }

    pub fn neumann(v: f64) -> Condition {
        Condition::Neumann(EdgeValue::Const(v))
    }

    pub fn dirichlet_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Condition {
        Condition::Dirichlet(EdgeValue::Fn(Arc::new(f)))
    }

    pub fn neumann_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Condition {
        Condition::Neumann(EdgeValue::Fn(Arc::new(f)))
    }

    pub fn is_dirichlet(&self) -> bool {
        matches!(self, Condition::Dirichlet(_))
    }

    pub fn value(&self) -> &EdgeValue {
        match self {
            Condition::Dirichlet(v) | Condition::Neumann(v) => v,
        }
    }
}

/// Domain edges, in the order boundary claims are resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edge {
    Left,
    Right,
    Bottom,
    Top,
}

fn role_slot(role: VariableRole) -> usize {
    match role {
        VariableRole::P => 0,
        VariableRole::U => 1,
        VariableRole::V => 2,
    }
}

fn edge_slot(edge: Edge) -> usize {
    match edge {
        Edge::Left => 0,
        Edge::Right => 1,
        Edge::Bottom => 2,
        Edge::Top => 3,
    }
}

/// The twelve (role, edge) condition slots of a coupled problem. Solvers
/// that only touch some variables read only those roles' slots.
#[derive(Clone, Debug, Default)]
pub struct BoundarySet {
    slots: [[Option<Condition>; 4]; 3],
}

impl BoundarySet {
    pub fn empty() -> BoundarySet {
        BoundarySet::default()
    }

    pub fn set(&mut self, role: VariableRole, edge: Edge, cond: Condition) {
        self.slots[role_slot(role)][edge_slot(edge)] = Some(cond);
    }

    pub fn with(mut self, role: VariableRole, edge: Edge, cond: Condition) -> BoundarySet {
        self.set(role, edge, cond);
        self
    }

    pub fn get(&self, role: VariableRole, edge: Edge) -> Option<&Condition> {
        self.slots[role_slot(role)][edge_slot(edge)].as_ref()
    }

    pub fn condition(&self, role: VariableRole, edge: Edge) -> Result<&Condition> {
        self.get(role, edge)
            .ok_or(Error::MissingCondition { role, edge })
    }
}

/// Body-force density sampled pointwise.
#[derive(Clone)]
pub struct ForceField {
    eval: Arc<dyn Fn(f64, f64) -> (f64, f64) + Send + Sync>,
}

impl ForceField {
    pub fn new(f: impl Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static) -> ForceField {
        ForceField { eval: Arc::new(f) }
    }

    pub fn zero() -> ForceField {
        ForceField::new(|_, _| (0.0, 0.0))
    }

    pub fn at(&self, x: f64, y: f64) -> (f64, f64) {
        (self.eval)(x, y)
    }
}

/// Pressure-driven pipe flow: pressures p0 (left) and p1 (right) push fluid
/// through no-slip horizontal walls.
#[derive(Clone, Copy, Debug)]
pub struct PipeParams {
    pub p0: f64,
    pub p1: f64,
    pub mu: f64,
}

impl PipeParams {
    pub fn new(p0: f64, p1: f64, mu: f64) -> Result<PipeParams> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::NonPositiveConstantViscosity { mu });
        }
        Ok(PipeParams { p0, p1, mu })
    }
}

/// Circular vesicle membrane of radius R centered at (R + L, 0), with a
/// mollification half-width eps for the membrane delta.
#[derive(Clone, Debug)]
pub struct VesicleParams {
    pub r: f64,
    pub l: f64,
    pub eps: f64,
    pub mu: ViscosityField,
}

impl VesicleParams {
    pub fn new(r: f64, l: f64, eps: f64, mu: ViscosityField) -> Result<VesicleParams> {
        for (what, value) in [("R", r), ("L", l), ("eps", eps)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::BadScenarioParameter { what, value });
            }
        }
        Ok(VesicleParams { r, l, eps, mu })
    }

    /// R = 5, L = 5, eps = R/2, unit viscosity.
    pub fn defaults() -> VesicleParams {
        VesicleParams {
            r: 5.0,
            l: 5.0,
            eps: 2.5,
            mu: ViscosityField::constant(1.0).expect("unit viscosity is positive"),
        }
    }

    /// Membrane center (R + L, 0).
    pub fn center(&self) -> (f64, f64) {
        (self.r + self.l, 0.0)
    }
}

/// Boundary conditions for the pipe: fixed pressures on the vertical walls
/// with p_y = 0 across the horizontal ones; no-slip u on the horizontal
/// walls with u_x = 0 through the vertical ones; v = 0 everywhere.
pub fn pipe_bcs(params: &PipeParams) -> BoundarySet {
    let mut bc = BoundarySet::empty();
    bc.set(VariableRole::P, Edge::Left, Condition::dirichlet(params.p0));
    bc.set(VariableRole::P, Edge::Right, Condition::dirichlet(params.p1));
    bc.set(VariableRole::P, Edge::Bottom, Condition::neumann(0.0));
    bc.set(VariableRole::P, Edge::Top, Condition::neumann(0.0));
    bc.set(VariableRole::U, Edge::Left, Condition::neumann(0.0));
    bc.set(VariableRole::U, Edge::Right, Condition::neumann(0.0));
    bc.set(VariableRole::U, Edge::Bottom, Condition::dirichlet(0.0));
    bc.set(VariableRole::U, Edge::Top, Condition::dirichlet(0.0));
    for edge in [Edge::Left, Edge::Right, Edge::Bottom, Edge::Top] {
        bc.set(VariableRole::V, edge, Condition::dirichlet(0.0));
    }
    bc
}

/// Closed-form pipe solution on the unit square: linear pressure drop and a
/// parabolic velocity profile vanishing at the horizontal walls.
pub fn pipe_analytic(params: &PipeParams, x: f64, y: f64) -> (f64, f64, f64) {
    let p = params.p0 + x * (params.p1 - params.p0);
    let u = (params.p1 - params.p0) * y * (y - 1.0) / (2.0 * params.mu);
    (p, u, 0.0)
}

/// Signed distance from the membrane circle: negative inside, zero on it.
pub fn signed_distance(params: &VesicleParams, x: f64, y: f64) -> f64 {
    let (cx, cy) = params.center();
    (x - cx).hypot(y - cy) - params.r
}

/// Regularized unit normal pointing away from the membrane center. The
/// radicand carries one machine epsilon so the center itself stays finite;
/// everywhere else the norm is 1 to within that regularization.
pub fn signed_distance_gradient(params: &VesicleParams, x: f64, y: f64) -> (f64, f64) {
    let (cx, cy) = params.center();
    let (dx, dy) = (x - cx, y - cy);
    let denom = (dx * dx + dy * dy + f64::EPSILON).sqrt();
    (dx / denom, dy / denom)
}

/// Cosine bump of unit mass and half-width eps around z = 0.
pub fn mollified_delta(z: f64, eps: f64) -> f64 {
    assert!(eps > 0.0, "mollification width must be positive");
    if z < -eps || z > eps {
        0.0
    } else {
        (1.0 + (std::f64::consts::PI * z / eps).cos()) / (2.0 * eps)
    }
}

/// Membrane force density (1/R) delta(z) grad z: curvature times the
/// mollified membrane indicator, directed along the outward normal.
pub fn membrane_force(params: &VesicleParams, x: f64, y: f64) -> (f64, f64) {
    let z = signed_distance(params, x, y);
    let d = mollified_delta(z, params.eps);
    if d == 0.0 {
        return (0.0, 0.0);
    }
    let (zx, zy) = signed_distance_gradient(params, x, y);
    let k = d / params.r;
    (k * zx, k * zy)
}

/// Closed-form vesicle solution at constant viscosity: the fluid is at rest
/// and pressure steps from -1/R inside the membrane to 0 outside, smoothed
/// across the mollification band.
pub fn vesicle_analytic(params: &VesicleParams, x: f64, y: f64) -> (f64, f64, f64) {
    let z = signed_distance(params, x, y);
    let (r, eps) = (params.r, params.eps);
    let p = if z < -eps {
        -1.0 / r
    } else if z > eps {
        0.0
    } else {
        let t = std::f64::consts::PI * z / eps;
        -(1.0 - z / eps - t.sin() / std::f64::consts::PI) / (2.0 * r)
    };
    (p, 0.0, 0.0)
}

/// A complete problem statement: domain, boundary conditions, body force,
/// viscosity, and (where one exists) the analytic solution.
#[derive(Clone, Debug)]
pub enum Scenario {
    Pipe(PipeParams),
    Vesicle(VesicleParams),
}

impl Scenario {
    pub fn tag(&self) -> &'static str {
        match self {
            Scenario::Pipe(_) => "pipe",
            Scenario::Vesicle(_) => "vesicle",
        }
    }

    /// (width, height, x0, y0). The pipe lives on the unit square; the
    /// vesicle in a 20 x 20 box vertically centered on the membrane.
    pub fn domain(&self) -> (f64, f64, f64, f64) {
        match self {
            Scenario::Pipe(_) => (1.0, 1.0, 0.0, 0.0),
            Scenario::Vesicle(_) => (20.0, 20.0, 0.0, -10.0),
        }
    }

    /// Build the scenario's grid at resolution M.
    pub fn grid(&self, m: usize, layout: Layout) -> Result<GridSpec> {
        let (w, h, x0, y0) = self.domain();
        GridSpec::build_at(m, w, h, x0, y0, layout)
    }

    pub fn boundary_conditions(&self) -> BoundarySet {
        match self {
            Scenario::Pipe(p) => pipe_bcs(p),
            Scenario::Vesicle(_) => {
                // resting far field: homogeneous Dirichlet on pressure and
                // both velocity components on all four walls
                let mut bc = BoundarySet::empty();
                for role in [VariableRole::P, VariableRole::U, VariableRole::V] {
                    for edge in [Edge::Left, Edge::Right, Edge::Bottom, Edge::Top] {
                        bc.set(role, edge, Condition::dirichlet(0.0));
                    }
                }
                bc
            }
        }
    }

    pub fn viscosity(&self) -> ViscosityField {
        match self {
            Scenario::Pipe(p) => {
                ViscosityField::constant(p.mu).expect("pipe params validate mu at construction")
            }
            Scenario::Vesicle(v) => v.mu.clone(),
        }
    }

    pub fn force_field(&self) -> ForceField {
        match self {
            Scenario::Pipe(_) => ForceField::zero(),
            Scenario::Vesicle(v) => {
                let params = v.clone();
                ForceField::new(move |x, y| membrane_force(&params, x, y))
            }
        }
    }

    /// The closed-form solution, when the scenario has one: always for the
    /// pipe, and for the vesicle only at constant viscosity (the derivation
    /// assumes it).
    pub fn analytic_at(&self, x: f64, y: f64) -> Option<(f64, f64, f64)> {
        match self {
            Scenario::Pipe(p) => Some(pipe_analytic(p, x, y)),
            Scenario::Vesicle(v) if v.mu.is_constant() => Some(vesicle_analytic(v, x, y)),
            Scenario::Vesicle(_) => None,
        }
    }

    pub fn has_analytic(&self) -> bool {
        match self {
            Scenario::Pipe(_) => true,
            Scenario::Vesicle(v) => v.mu.is_constant(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pipe() -> PipeParams {
        PipeParams::new(200.0, 100.0, 2.0).unwrap()
    }

    #[test]
    fn pipe_conditions_fill_their_slots() {
        let bc = pipe_bcs(&pipe());
        match bc.condition(VariableRole::P, Edge::Left).unwrap() {
            Condition::Dirichlet(v) => assert_eq!(v.eval(0.3), 200.0),
            _ => panic!("left pressure must be Dirichlet"),
        }
        match bc.condition(VariableRole::P, Edge::Top).unwrap() {
            Condition::Neumann(v) => assert_eq!(v.eval(0.5), 0.0),
            _ => panic!("top pressure must be Neumann"),
        }
        match bc.condition(VariableRole::U, Edge::Top).unwrap() {
            Condition::Dirichlet(v) => assert_eq!(v.eval(0.5), 0.0),
            _ => panic!("u must be no-slip on top"),
        }
        assert!(!bc.condition(VariableRole::U, Edge::Left).unwrap().is_dirichlet());
        for edge in [Edge::Left, Edge::Right, Edge::Bottom, Edge::Top] {
            assert!(bc.condition(VariableRole::V, edge).unwrap().is_dirichlet());
        }
    }

    #[test]
    fn pipe_analytic_matches_hand_values() {
        let p = pipe();
        let (pm, _, _) = pipe_analytic(&p, 0.5, 0.2);
        assert_eq!(pm, 150.0);
        let (_, u, v) = pipe_analytic(&p, 0.8, 0.5);
        assert!((u - 6.25).abs() < 1e-14);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn pipe_profile_satisfies_the_momentum_balance() {
        // mu * u_yy == p1 - p0, checked by finite differences
        let p = pipe();
        let h = 0.01;
        for y in [0.1, 0.37, 0.5, 0.92] {
            let u = |yy: f64| pipe_analytic(&p, 0.4, yy).1;
            let uyy = (u(y + h) - 2.0 * u(y) + u(y - h)) / (h * h);
            assert!((p.mu * uyy - (p.p1 - p.p0)).abs() < 1e-8);
        }
    }

    #[test]
    fn pipe_rejects_non_positive_viscosity() {
        assert!(matches!(
            PipeParams::new(200.0, 100.0, 0.0),
            Err(Error::NonPositiveConstantViscosity { .. })
        ));
    }

    fn vesicle() -> VesicleParams {
        VesicleParams::defaults()
    }

    #[test]
    fn signed_distance_hand_values() {
        let v = vesicle();
        assert_eq!(signed_distance(&v, 10.0, 0.0), -5.0);
        assert_eq!(signed_distance(&v, 5.0, 0.0), 0.0);
        assert!((signed_distance(&v, 10.0, 6.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn distance_gradient_points_radially_outward() {
        let v = vesicle();
        let (zx, zy) = signed_distance_gradient(&v, 5.0, 0.0);
        assert!((zx + 1.0).abs() < 1e-12 && zy.abs() < 1e-12);
        let (zx, zy) = signed_distance_gradient(&v, 13.0, 3.0);
        let s = 1.0 / 2.0f64.sqrt();
        assert!((zx - s).abs() < 1e-12 && (zy - s).abs() < 1e-12);
        let (zx, zy) = signed_distance_gradient(&v, 10.0, 10.0);
        assert!(zx.abs() < 1e-12 && (zy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distance_gradient_is_regular_at_the_center_and_unit_elsewhere() {
        let v = vesicle();
        let (zx, zy) = signed_distance_gradient(&v, 10.0, 0.0);
        let n = zx.hypot(zy);
        assert!(n.is_finite() && n < 1e-6, "regularized center, got norm {n}");
        for k in 0..200 {
            let (x, y) = (0.1 * k as f64, 8.0 - 0.07 * k as f64);
            let (zx, zy) = signed_distance_gradient(&v, x, y);
            let n = zx.hypot(zy);
            assert!(n <= 1.0 + 1e-15);
            let dist = (x - 10.0).hypot(y);
            if dist > 1e-3 {
                assert!(n >= 1.0 - 1e-6);
            }
        }
    }

    #[test]
    fn delta_peak_support_and_mass() {
        assert!((mollified_delta(0.0, 2.5) - 0.4).abs() < 1e-15);
        assert_eq!(mollified_delta(2.5, 2.5), 0.0);
        assert_eq!(mollified_delta(-2.5, 2.5), 0.0);
        assert_eq!(mollified_delta(3.0, 2.5), 0.0);
        // Simpson quadrature of the bump over its support
        let eps = 2.5;
        let n = 4000;
        let h = 2.0 * eps / n as f64;
        let mut s = mollified_delta(-eps, eps) + mollified_delta(eps, eps);
        for k in 1..n {
            let z = -eps + k as f64 * h;
            s += mollified_delta(z, eps) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        let mass = s * h / 3.0;
        assert!((mass - 1.0).abs() < 1e-10, "unit mass, got {mass}");
    }

    #[test]
    fn membrane_force_hand_values() {
        let v = vesicle();
        let (fx, fy) = membrane_force(&v, 5.0, 0.0);
        assert!((fx + 0.08).abs() < 1e-12 && fy.abs() < 1e-14);
        assert_eq!(membrane_force(&v, 10.0, 0.0), (0.0, 0.0));
        // z = eps exactly: delta vanishes
        assert_eq!(membrane_force(&v, 17.5, 0.0), (0.0, 0.0));
    }

    #[test]
    fn membrane_force_is_radially_symmetric() {
        let v = vesicle();
        let rad = 4.2;
        let (f0, f0y) = membrane_force(&v, 10.0 + rad, 0.0);
        assert!(f0y.abs() < 1e-15);
        for k in 0..100 {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 * 0.618033988749895).fract();
            let (x, y) = (10.0 + rad * theta.cos(), rad * theta.sin());
            let (fx, fy) = membrane_force(&v, x, y);
            assert!((fx - f0 * theta.cos()).abs() < 1e-12);
            assert!((fy - f0 * theta.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn vesicle_pressure_plateaus_and_stays_continuous() {
        let v = vesicle();
        let (p, u, w) = vesicle_analytic(&v, 10.0, 0.0);
        assert!((p + 0.2).abs() < 1e-14);
        assert_eq!((u, w), (0.0, 0.0));
        let (p, _, _) = vesicle_analytic(&v, 5.0, 0.0);
        assert!((p + 0.1).abs() < 1e-14);
        let (p, _, _) = vesicle_analytic(&v, 19.9, 9.0);
        assert_eq!(p, 0.0);
        // branch agreement where z hits +-eps exactly
        let (inner, _, _) = vesicle_analytic(&v, 12.5, 0.0);
        assert!((inner + 0.2).abs() < 1e-12);
        let (outer, _, _) = vesicle_analytic(&v, 17.5, 0.0);
        assert!(outer.abs() < 1e-12);
    }

    #[test]
    fn vesicle_rejects_bad_parameters() {
        let mu = ViscosityField::constant(1.0).unwrap();
        assert!(matches!(
            VesicleParams::new(0.0, 5.0, 2.5, mu.clone()),
            Err(Error::BadScenarioParameter { what: "R", .. })
        ));
        assert!(matches!(
            VesicleParams::new(5.0, -1.0, 2.5, mu.clone()),
            Err(Error::BadScenarioParameter { what: "L", .. })
        ));
        assert!(matches!(
            VesicleParams::new(5.0, 5.0, 0.0, mu),
            Err(Error::BadScenarioParameter { what: "eps", .. })
        ));
    }

    #[test]
    fn scenario_bundles_are_consistent() {
        let s = Scenario::Pipe(pipe());
        assert_eq!(s.tag(), "pipe");
        assert_eq!(s.domain(), (1.0, 1.0, 0.0, 0.0));
        assert_eq!(s.force_field().at(0.3, 0.7), (0.0, 0.0));
        assert!(s.has_analytic());

        let v = Scenario::Vesicle(vesicle());
        assert_eq!(v.tag(), "vesicle");
        assert_eq!(v.domain(), (20.0, 20.0, 0.0, -10.0));
        assert_eq!(v.force_field().at(5.0, 0.0), membrane_force(&vesicle(), 5.0, 0.0));
        assert!(v.has_analytic());
        assert!(v.boundary_conditions().condition(VariableRole::P, Edge::Top).unwrap().is_dirichlet());

        let varying = Scenario::Vesicle(
            VesicleParams::new(5.0, 5.0, 2.5, ViscosityField::varying(|_, _| 1.0)).unwrap(),
        );
        assert!(!varying.has_analytic());
        assert_eq!(varying.analytic_at(1.0, 1.0), None);
    }

    #[test]
    fn vesicle_grid_is_vertically_centered_on_the_membrane() {
        let s = Scenario::Vesicle(vesicle());
        let g = s.grid(50, Layout::ProjectionStaggered).unwrap();
        assert_eq!(g.dx, 0.4);
        assert_eq!(g.y0, -10.0);
        assert_eq!(g.x0, 0.0);
    }
}
