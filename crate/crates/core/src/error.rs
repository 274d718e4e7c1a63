use thiserror::Error;

/// Everything that can go wrong while building a complex, assembling its
/// equilibrium system, solving it, or constructing the dual.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    MalformedDocument(String),

    #[error("face {face} is not planar (max deviation {deviation:e})")]
    NonPlanarFace { face: usize, deviation: f64 },

    #[error("cell {cell} is not closed")]
    OpenCell { cell: usize },

    #[error("face {face} is shared by {cells} cells, expected exactly 2")]
    DanglingFace { face: usize, cells: usize },

    #[error("cell orientations are inconsistent at cell {cell}")]
    InconsistentOrientation { cell: usize },

    #[error("no equilibrium equations remain after removing the stress cell")]
    EmptySystem,

    #[error("the equilibrium matrix has full column rank; only q = 0 solves it")]
    ZeroDof,

    #[error("{what}: expected length {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no density vector with every entry at least one satisfies the equilibrium")]
    Infeasible,

    #[error("the density vector is zero; the dual collapses into a single point")]
    ZeroSolution,

    #[error("density vector violates equilibrium (residual {residual:e})")]
    Unbalanced { residual: f64 },

    #[error("the cells of the complex are not connected through shared faces")]
    DisconnectedComplex,

    #[error("member classification needs a primal interpreted as a force diagram")]
    RoleMismatch,

    #[error("cell {cell} cannot anchor the dual: {reason}")]
    InvalidAnchor { cell: usize, reason: &'static str },

    #[error("linear program failed: {0}")]
    Solver(String),
}

impl Error {
    /// Stable machine-readable identifier, used in CLI reports and HTTP bodies.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedDocument(_) => "MalformedDocument",
            Error::NonPlanarFace { .. } => "NonPlanarFace",
            Error::OpenCell { .. } => "OpenCell",
            Error::DanglingFace { .. } => "DanglingFace",
            Error::InconsistentOrientation { .. } => "InconsistentOrientation",
            Error::EmptySystem => "EmptySystem",
            Error::ZeroDof => "ZeroDof",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Infeasible => "Infeasible",
            Error::ZeroSolution => "ZeroSolution",
            Error::Unbalanced { .. } => "Unbalanced",
            Error::DisconnectedComplex => "DisconnectedComplex",
            Error::RoleMismatch => "RoleMismatch",
            Error::InvalidAnchor { .. } => "InvalidAnchor",
            Error::Solver(_) => "Solver",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
