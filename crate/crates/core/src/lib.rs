//! Algebraic construction of reciprocal polyhedral diagrams.
//!
//! Start from a closed polyhedral [`CellComplex`], pick a stress cell, assemble
//! the [`EquilibriumSystem`] `A q = 0`, choose a density vector `q` with one of
//! the [`solvers`], and build the reciprocal [`DualDiagram`].
//!
//! ```
//! use polyrecip::{fixtures, solvers, Anchor, DualDiagram, EquilibriumSystem};
//!
//! let primal = fixtures::tetra_fixture();
//! let system = EquilibriumSystem::new(&primal)?;
//! assert_eq!(system.analysis().dof, 1);
//!
//! let q = solvers::solve_lp(&system, &[1.0; 6])?;
//! let dual = DualDiagram::algebraic(&system, &q.q, Anchor::default())?;
//! assert_eq!(dual.vertices.len(), 4);
//! # Ok::<(), polyrecip::Error>(())
//! ```

pub mod complex;
pub mod dual;
pub mod equilibrium;
mod error;
mod linalg;
pub mod solvers;
pub mod topology;

pub use complex::{fixtures, parse_complex, CellComplex, Direction, Point3, Role, Vec3};
pub use dual::{verify_reciprocity, Anchor, DualDiagram, MemberForce, ReciprocityReport};
pub use equilibrium::{AnalysisReport, EquilibriumSystem, Tolerances};
pub use error::{Error, Result};
pub use solvers::{DensityVector, Method, SolverParams};
pub use topology::IncidenceSet;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/complexes.md")]
    mod complexes {}
    #[doc = include_str!("../../../book/src/orientation.md")]
    mod orientation {}
    #[doc = include_str!("../../../book/src/equilibrium.md")]
    mod equilibrium {}
    #[doc = include_str!("../../../book/src/solvers.md")]
    mod solvers {}
    #[doc = include_str!("../../../book/src/dual.md")]
    mod dual {}
    #[doc = include_str!("../../../book/src/forces.md")]
    mod forces {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
