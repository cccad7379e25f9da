//! Discretization geometry: the three grid layouts, per-variable node
//! placement, and the mapping from 2D subindices to stacked linear indices.

use crate::error::{Error, Result};
use serde::Serialize;

/// Node placement scheme. Collocated puts every variable on one node-based
/// lattice (dx = width/(M-1)). The staggered layouts are cell-based
/// (dx = width/M, M cells per direction) and differ in where velocity lives:
/// MAC staggering offsets u and v onto cell faces, the projection layout
/// collocates u and v on the lattice diagonally offset from cell centers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Layout {
    Collocated,
    SaddleStaggered,
    ProjectionStaggered,
}

/// Which physical variable a field or index block holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VariableRole {
    P,
    U,
    V,
}

/// Geometry of one discretization: M nodes per variable per direction on a
/// width x height domain anchored at (x0, y0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub m: usize,
    pub width: f64,
    pub height: f64,
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub layout: Layout,
}

impl GridSpec {
    /// Build a grid on a domain anchored at the origin.
    pub fn build(m: usize, width: f64, height: f64, layout: Layout) -> Result<GridSpec> {
        GridSpec::build_at(m, width, height, 0.0, 0.0, layout)
    }

    /// Build a grid with an explicit lower-left corner.
    pub fn build_at(
        m: usize,
        width: f64,
        height: f64,
        x0: f64,
        y0: f64,
        layout: Layout,
    ) -> Result<GridSpec> {
        if m < 3 {
            return Err(Error::TooFewNodes { m });
        }
        if !(width > 0.0) || !(height > 0.0) {
            return Err(Error::BadExtents { width, height });
        }
        let cells = match layout {
            Layout::Collocated => (m - 1) as f64,
            Layout::SaddleStaggered | Layout::ProjectionStaggered => m as f64,
        };
        let dx = width / cells;
        let dy = height / cells;
        if dx != dy {
            return Err(Error::AnisotropicSpacing { dx, dy });
        }
        Ok(GridSpec {
            m,
            width,
            height,
            x0,
            y0,
            dx,
            dy,
            layout,
        })
    }

    /// Offsets of a role's (0,0) node from (x0, y0), in units of (dx, dy).
    fn origin_offset(&self, role: VariableRole) -> (f64, f64) {
        match self.layout {
            Layout::Collocated => (0.0, 0.0),
            Layout::SaddleStaggered => match role {
                VariableRole::P => (0.5, 0.5),
                VariableRole::U => (1.0, 0.5),
                VariableRole::V => (0.5, 1.0),
            },
            Layout::ProjectionStaggered => match role {
                VariableRole::P => (0.5, 0.5),
                VariableRole::U | VariableRole::V => (1.0, 1.0),
            },
        }
    }

    /// Coordinates of node (i, j) of the given role.
    pub fn node_coords(&self, role: VariableRole, i: usize, j: usize) -> Result<(f64, f64)> {
        if i >= self.m || j >= self.m {
            return Err(Error::NodeOutOfRange { i, j, m: self.m });
        }
        let (ox, oy) = self.origin_offset(role);
        Ok((
            self.x0 + self.dx * (i as f64 + ox),
            self.y0 + self.dy * (j as f64 + oy),
        ))
    }

    /// The 1D coordinate axes (x for all i, y for all j) of a role's lattice.
    pub fn node_axes(&self, role: VariableRole) -> (Vec<f64>, Vec<f64>) {
        let (ox, oy) = self.origin_offset(role);
        let xs = (0..self.m)
            .map(|i| self.x0 + self.dx * (i as f64 + ox))
            .collect();
        let ys = (0..self.m)
            .map(|j| self.y0 + self.dy * (j as f64 + oy))
            .collect();
        (xs, ys)
    }
}

/// Bijective map from (role, i, j) to indices into a stacked vector, with
/// contiguous role blocks in the order the roles were given.
#[derive(Clone, Debug)]
pub struct IndexMap {
    m: usize,
    roles: Vec<VariableRole>,
}

impl IndexMap {
    pub fn build(spec: &GridSpec, roles: &[VariableRole]) -> Result<IndexMap> {
        if roles.is_empty() {
            return Err(Error::BadRoleList);
        }
        for (k, r) in roles.iter().enumerate() {
            if roles[..k].contains(r) {
                return Err(Error::BadRoleList);
            }
        }
        Ok(IndexMap {
            m: spec.m,
            roles: roles.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.roles.len() * self.m * self.m
    }

    pub fn is_empty(&self) -> bool {
        false // at least one role with M >= 3 nodes per direction
    }

    /// Offset of a role's block within the stacked vector.
    pub fn block_start(&self, role: VariableRole) -> Result<usize> {
        self.roles
            .iter()
            .position(|r| *r == role)
            .map(|k| k * self.m * self.m)
            .ok_or(Error::RoleNotMapped { role })
    }

    pub fn index(&self, role: VariableRole, i: usize, j: usize) -> Result<usize> {
        if i >= self.m || j >= self.m {
            return Err(Error::NodeOutOfRange { i, j, m: self.m });
        }
        Ok(self.block_start(role)? + j * self.m + i)
    }

    pub fn unindex(&self, index: usize) -> Result<(VariableRole, usize, usize)> {
        let n = self.m * self.m;
        let block = index / n;
        if block >= self.roles.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.len(),
            });
        }
        let rem = index % n;
        Ok((self.roles[block], rem % self.m, rem / self.m))
    }
}

/// M x M values of one variable bound to its grid and role. Storage is
/// x-fastest: value (i, j) lives at j*M + i, matching the stacked vectors
/// the solvers assemble.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    spec: GridSpec,
    role: VariableRole,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(spec: GridSpec, role: VariableRole) -> ScalarField {
        ScalarField {
            spec,
            role,
            values: vec![0.0; spec.m * spec.m],
        }
    }

    /// Sample a function at every node of the role's lattice.
    pub fn from_fn(spec: GridSpec, role: VariableRole, f: impl Fn(f64, f64) -> f64) -> ScalarField {
        let (xs, ys) = spec.node_axes(role);
        let mut values = Vec::with_capacity(spec.m * spec.m);
        for y in &ys {
            for x in &xs {
                values.push(f(*x, *y));
            }
        }
        ScalarField { spec, role, values }
    }

    /// Wrap an existing x-fastest value vector.
    pub fn from_values(spec: GridSpec, role: VariableRole, values: Vec<f64>) -> Result<ScalarField> {
        if values.len() != spec.m * spec.m {
            return Err(Error::DimensionMismatch {
                what: "scalar field values",
                expected: spec.m * spec.m,
                got: values.len(),
            });
        }
        Ok(ScalarField { spec, role, values })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn role(&self) -> VariableRole {
        self.role
    }

    pub fn m(&self) -> usize {
        self.spec.m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.spec.m && j < self.spec.m, "node out of range");
        self.values[j * self.spec.m + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(i < self.spec.m && j < self.spec.m, "node out of range");
        self.values[j * self.spec.m + i] = value;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    /// Largest absolute nodewise difference between two fields on one lattice.
    pub fn max_abs_diff(&self, other: &ScalarField) -> Result<f64> {
        if self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch {
                what: "field comparison",
                expected: self.values.len(),
                got: other.values.len(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |a, (x, y)| a.max((x - y).abs())))
    }
}
