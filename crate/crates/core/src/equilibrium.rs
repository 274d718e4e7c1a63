//! The equilibrium matrix `A` and its rank analysis.
//!
//! `A` stacks `C_ef N_x`, `C_ef N_y` and `C_ef N_z`: rows `0..e'` are the x
//! equations of the active edges, then the y rows, then the z rows. Column
//! `j` belongs to active face `j`. A density vector `q` with `A q = 0` makes
//! every dual face close.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::complex::{CellComplex, Vec3};
use crate::error::{Error, Result};
use crate::solvers::{pseudoinverse, rref, Rref};
use crate::topology::IncidenceSet;

/// Numerical thresholds used throughout the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Singular values below `rank * σ_max` count as zero.
    pub rank: f64,
    /// Row-reduction entries below `pivot * column max` count as zero.
    pub pivot: f64,
    /// Accepted `‖A q‖∞ / max(1, ‖q‖∞)`.
    pub residual: f64,
    /// Member forces with `|ψ| ≤ zero_label * max(1, ‖q‖∞)` are labelled zero.
    pub zero_label: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank: 1e-10,
            pivot: 1e-10,
            residual: 1e-8,
            zero_label: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Degrees of geometric indeterminacy of the dual, `f' - rank`.
    pub dof: usize,
    /// Non-pivot columns of the row-reduced matrix.
    pub independent_columns: Vec<usize>,
    /// Primal face ids of [`Self::independent_columns`].
    pub independent_faces: Vec<usize>,
    /// Singular values in decreasing order.
    pub singular_values: Vec<f64>,
    /// Smallest kept and largest discarded singular value, where both exist.
    pub gap: (Option<f64>, Option<f64>),
    /// `dof == 0`: only `q = 0` balances, and the dual collapses to a point.
    pub collapses: bool,
}

/// `A` together with everything derived from it. Built eagerly and
/// immutable afterwards, so it can be shared freely between threads.
#[derive(Clone, Debug)]
pub struct EquilibriumSystem {
    complex: CellComplex,
    incidence: IncidenceSet,
    matrix: DMatrix<f64>,
    normals: Vec<Vec3>,
    tolerances: Tolerances,
    analysis: AnalysisReport,
    rref: Rref,
    pinv: DMatrix<f64>,
    nullspace: DMatrix<f64>,
}

impl EquilibriumSystem {
    pub fn new(complex: &CellComplex) -> Result<Self> {
        Self::with_tolerances(complex, Tolerances::default())
    }

    pub fn with_tolerances(complex: &CellComplex, tolerances: Tolerances) -> Result<Self> {
        let incidence = IncidenceSet::new(complex)?;
        let active = &incidence.active;
        if active.edges.is_empty() || active.faces.is_empty() {
            return Err(Error::EmptySystem);
        }
        let normals: Vec<Vec3> = active.faces.iter().map(|&f| complex.faces()[f].normal()).collect();
        let matrix = assemble(&incidence, &normals);

        let (sv, nullspace) = spectrum(&matrix, tolerances.rank);
        let rank = matrix.ncols() - nullspace.ncols();
        let dof = nullspace.ncols();

        let rref = rref(&matrix, tolerances.pivot);
        let independent_columns: Vec<usize> = (0..matrix.ncols()).filter(|c| !rref.pivots.contains(c)).collect();
        let independent_faces = independent_columns.iter().map(|&c| active.faces[c]).collect();

        let analysis = AnalysisReport {
            rows: matrix.nrows(),
            cols: matrix.ncols(),
            rank,
            dof,
            independent_columns,
            independent_faces,
            gap: (
                rank.checked_sub(1).map(|i| sv[i]),
                sv.get(rank).copied(),
            ),
            singular_values: sv,
            collapses: dof == 0,
        };
        let pinv = pseudoinverse(&matrix, tolerances.rank);

        Ok(EquilibriumSystem {
            complex: complex.clone(),
            incidence,
            matrix,
            normals,
            tolerances,
            analysis,
            rref,
            pinv,
            nullspace,
        })
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn incidence(&self) -> &IncidenceSet {
        &self.incidence
    }

    /// The equilibrium matrix `A`.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Unit normal of each active face, in column order.
    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    pub fn analysis(&self) -> &AnalysisReport {
        &self.analysis
    }

    pub fn rref(&self) -> &Rref {
        &self.rref
    }

    pub fn pseudoinverse(&self) -> &DMatrix<f64> {
        &self.pinv
    }

    /// Orthonormal basis of the right nullspace of `A`, one column per dof.
    pub fn nullspace(&self) -> &DMatrix<f64> {
        &self.nullspace
    }

    /// Primal edge id of each block row; row `k * e' + i` belongs to
    /// `row_edges()[i]` for every coordinate block `k`.
    pub fn row_edges(&self) -> &[usize] {
        &self.incidence.active.edges
    }

    /// Primal face id of each column.
    pub fn column_faces(&self) -> &[usize] {
        &self.incidence.active.faces
    }

    /// `‖A q‖∞`.
    pub fn residual(&self, q: &[f64]) -> f64 {
        (&self.matrix * DVector::from_column_slice(q)).amax()
    }

    /// Whether `‖A q‖∞ ≤ tol * max(1, ‖q‖∞)` at the residual tolerance.
    pub fn is_balanced(&self, q: &[f64]) -> bool {
        let scale = q.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        self.residual(q) <= self.tolerances.residual * scale
    }
}

fn assemble(incidence: &IncidenceSet, normals: &[Vec3]) -> DMatrix<f64> {
    let (e, f) = incidence.edge_face.shape();
    let mut a = DMatrix::zeros(3 * e, f);
    for &(row, col, s) in incidence.edge_face.entries() {
        for k in 0..3 {
            a[(k * e + row, col)] = s as f64 * normals[col][k];
        }
    }
    a
}

/// Singular values in decreasing order and an orthonormal nullspace basis.
fn spectrum(a: &DMatrix<f64>, rank_tol: f64) -> (Vec<f64>, DMatrix<f64>) {
    let cols = a.ncols();
    let svd = crate::linalg::svd(a);
    let cutoff = rank_tol * svd.s.first().copied().unwrap_or(0.0);
    let rank = svd.s.iter().filter(|&&s| s > cutoff).count();
    let basis = svd.v.columns(rank, cols - rank).into_owned();
    (svd.s, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::{box_grid, glued_boxes, tetra_fixture};
    use crate::complex::{Direction, Role};

    #[test]
    fn tetra_system_shape_rank_and_dof() {
        let sys = EquilibriumSystem::new(&tetra_fixture()).unwrap();
        let a = sys.analysis();
        assert_eq!(sys.matrix().shape(), (12, 6));
        assert_eq!((a.rank, a.dof), (5, 1));
        assert_eq!(a.independent_columns.len(), 1);
        assert!(!a.collapses);
        let zero_rows = (0..12).filter(|&r| sys.matrix().row(r).amax() == 0.0).count();
        assert_eq!(zero_rows, 1);
        let pairs: Vec<(usize, usize)> = sys
            .row_edges()
            .iter()
            .map(|&e| (sys.complex().edges()[e].tail, sys.complex().edges()[e].head))
            .collect();
        assert_eq!(pairs, vec![(0, 3), (0, 1), (0, 2), (0, 4)]);
    }

    #[test]
    fn blocks_share_the_edge_face_pattern() {
        let sys = EquilibriumSystem::new(&box_grid([2, 2, 2])).unwrap();
        let ef = sys.incidence().edge_face.to_dense();
        let e = ef.nrows();
        for k in 0..3 {
            for r in 0..e {
                for c in 0..ef.ncols() {
                    let a = sys.matrix()[(k * e + r, c)];
                    if ef[(r, c)] == 0.0 {
                        assert_eq!(a, 0.0);
                    } else {
                        assert_eq!(a, ef[(r, c)] * sys.normals()[c][k]);
                    }
                }
            }
        }
    }

    #[test]
    fn nullspace_is_orthonormal_and_annihilated() {
        for c in [tetra_fixture(), box_grid([2, 2, 2]), box_grid([3, 2, 1])] {
            let sys = EquilibriumSystem::new(&c).unwrap();
            let n = sys.nullspace();
            assert_eq!(n.ncols(), sys.analysis().dof);
            assert!((n.transpose() * n - DMatrix::identity(n.ncols(), n.ncols())).amax() < 1e-12);
            assert!((sys.matrix() * n).amax() < 1e-12);
        }
    }

    #[test]
    fn glued_boxes_have_no_equations_around_the_exterior() {
        assert_eq!(EquilibriumSystem::new(&glued_boxes()).unwrap_err(), Error::EmptySystem);
        let boxed = glued_boxes().with_stress(Role::Form, 0, Direction::Inward).unwrap();
        let sys = EquilibriumSystem::new(&boxed).unwrap();
        assert_eq!(sys.matrix().shape(), (24, 5));
        assert_eq!(sys.analysis().dof, 0);
        assert!(sys.analysis().collapses);
        assert!(sys.analysis().independent_faces.is_empty());
    }

    #[test]
    fn gap_brackets_the_cutoff() {
        let sys = EquilibriumSystem::new(&tetra_fixture()).unwrap();
        let (kept, dropped) = sys.analysis().gap;
        assert!(kept.unwrap() > 0.1);
        assert!(dropped.unwrap() < 1e-12);
    }

    #[test]
    fn rank_survives_uniform_scaling() {
        let c = box_grid([3, 2, 1]);
        let scaled = c.map_vertices(|p| p * 1e3).unwrap();
        let a = EquilibriumSystem::new(&c).unwrap();
        let b = EquilibriumSystem::new(&scaled).unwrap();
        assert_eq!(a.analysis().rank, b.analysis().rank);
        assert!((a.matrix() - b.matrix()).amax() < 1e-15);
    }
}
