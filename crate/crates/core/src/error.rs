use crate::grid::{Layout, VariableRole};
use crate::scenarios::Edge;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the solver suite. Messages are
/// single-line so the command-line front end can emit them machine-parsable.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("M must be at least 3, got {m}")]
    TooFewNodes { m: usize },

    #[error("domain extents must be positive, got width={width}, height={height}")]
    BadExtents { width: f64, height: f64 },

    #[error("grid spacing must be square (dx = dy), got dx={dx} and dy={dy}")]
    AnisotropicSpacing { dx: f64, dy: f64 },

    #[error("node ({i},{j}) out of range for M={m}")]
    NodeOutOfRange { i: usize, j: usize, m: usize },

    #[error("role {role:?} is not part of this index map")]
    RoleNotMapped { role: VariableRole },

    #[error("linear index {index} out of range for map of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("index map roles must be non-empty and free of duplicates")]
    BadRoleList,

    #[error("triplet ({row},{col}) outside a {n_rows}x{n_cols} matrix")]
    TripletOutOfRange {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },

    #[error("sparse assembly failed: {0}")]
    AssemblyFailed(String),

    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("solve tolerance must be positive, got {tol}")]
    BadTolerance { tol: f64 },

    #[error("matrix is singular (achieved relative residual {achieved_residual:e})")]
    SingularMatrix { achieved_residual: f64 },

    #[error("linear solve did not converge: relative residual {achieved_residual:e} exceeds tolerance {tol:e}")]
    NoConvergence { achieved_residual: f64, tol: f64 },

    #[error("expected {expected:?} layout, got {got:?}")]
    WrongLayout { expected: Layout, got: Layout },

    #[error("no boundary condition for role {role:?} on the {edge:?} edge")]
    MissingCondition { role: VariableRole, edge: Edge },

    #[error("viscosity must be positive, got {mu} at ({x}, {y})")]
    NonPositiveViscosity { mu: f64, x: f64, y: f64 },

    #[error("viscosity must be positive, got {mu}")]
    NonPositiveConstantViscosity { mu: f64 },

    #[error("scenario parameter {what} must be positive, got {value}")]
    BadScenarioParameter { what: &'static str, value: f64 },

    #[error("the {method} method requires spatially constant viscosity; this method cannot be used in that case")]
    VaryingViscosityUnsupported { method: &'static str },

    #[error("unsupported combination: {what}")]
    UnsupportedCombination { what: String },

    #[error("time step must be positive, got {dt}")]
    NonPositiveDt { dt: f64 },

    #[error("n_steps must be at least 1")]
    ZeroSteps,

    #[error("repeats must be at least 1")]
    ZeroRepeats,

    #[error("resolution list must contain at least 2 strictly increasing entries")]
    BadResolutionList,

    #[error("order fit needs at least 2 points, got {got}")]
    FitTooFewPoints { got: usize },

    #[error("order fit needs positive spacings and errors, got (dx={dx}, error={err})")]
    FitNonPositive { dx: f64, err: f64 },

    #[error("timing set is missing method '{method}' at M={m}")]
    IncompleteTimingSet { method: &'static str, m: usize },

    #[error("at M={m}: {source}")]
    AtResolution { m: usize, source: Box<Error> },

    #[error("unknown method '{0}'")]
    UnknownMethod(String),

    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("json encoding failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Wrap a failure with the resolution at which it occurred, so multi-M
    /// studies report the failing grid.
    pub fn at_resolution(self, m: usize) -> Error {
        Error::AtResolution {
            m,
            source: Box::new(self),
        }
    }
}
