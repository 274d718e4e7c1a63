//! Signed incidence matrices and cell orientations.
//!
//! Rows and columns of the matrices use the active numbering of
//! [`ActiveSet`]: row `i` of `edge_face` is edge `active.edges[i]`, column `j`
//! is face `active.faces[j]`, and so on. The only exception is the vertex
//! axis of `edge_vertex`, which spans every vertex of the complex.

use std::collections::VecDeque;

use nalgebra::DMatrix;

use crate::complex::{ActiveSet, CellComplex, Vec3};
use crate::error::{Error, Result};

/// Sparse matrix with entries in {-1, +1}, stored as sorted triplets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedIncidence {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, i8)>,
}

impl SignedIncidence {
    fn from_triplets(rows: usize, cols: usize, mut entries: Vec<(usize, usize, i8)>) -> Self {
        entries.retain(|&(_, _, s)| s != 0);
        entries.sort_unstable();
        SignedIncidence { rows, cols, entries }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// `(row, col, sign)` triplets in row-major order.
    pub fn entries(&self) -> &[(usize, usize, i8)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries
            .binary_search_by(|&(r, c, _)| (r, c).cmp(&(row, col)))
            .map_or(0, |i| self.entries[i].2)
    }

    /// Nonzero `(col, sign)` pairs of one row.
    pub fn row(&self, row: usize) -> impl Iterator<Item = (usize, i8)> + '_ {
        let start = self.entries.partition_point(|&(r, _, _)| r < row);
        self.entries[start..]
            .iter()
            .take_while(move |&&(r, _, _)| r == row)
            .map(|&(_, c, s)| (c, s))
    }

    pub fn transpose(&self) -> Self {
        let entries = self.entries.iter().map(|&(r, c, s)| (c, r, s)).collect();
        SignedIncidence::from_triplets(self.cols, self.rows, entries)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for &(r, c, s) in &self.entries {
            m[(r, c)] = s as f64;
        }
        m
    }
}

/// Orientation of each face relative to each cell it bounds: `+1` when the
/// canonical face normal points out of the cell viewed as a solid
/// polyhedron. For the unbounded exterior cell this is the outward normal of
/// the hull.
#[derive(Clone, Debug, PartialEq)]
pub struct CellGeometry {
    /// Per cell, `(face, sign)` in the order the cell lists its faces.
    pub outward: Vec<Vec<(usize, i8)>>,
    /// Enclosed volume of each cell's boundary.
    pub volumes: Vec<f64>,
}

impl CellGeometry {
    pub fn new(complex: &CellComplex) -> Result<Self> {
        let mut outward = Vec::with_capacity(complex.cells().len());
        let mut volumes = Vec::with_capacity(complex.cells().len());
        for c in 0..complex.cells().len() {
            let (signs, volume) = orient_cell(complex, c)?;
            outward.push(signs);
            volumes.push(volume);
        }
        Ok(CellGeometry { outward, volumes })
    }

    pub fn sign(&self, cell: usize, face: usize) -> i8 {
        self.outward[cell]
            .iter()
            .find(|&&(f, _)| f == face)
            .map_or(0, |&(_, s)| s)
    }
}

/// Orients the faces of one cell consistently across shared edges, then
/// picks the orientation with positive enclosed volume.
fn orient_cell(complex: &CellComplex, cell: usize) -> Result<(Vec<(usize, i8)>, f64)> {
    let faces = complex.cells()[cell].faces();
    let mut eps = vec![0i8; faces.len()];
    let mut queue = VecDeque::new();
    for start in 0..faces.len() {
        if eps[start] != 0 {
            continue;
        }
        eps[start] = 1;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let fi = &complex.faces()[faces[i]];
            for (j, &g) in faces.iter().enumerate() {
                if j == i {
                    continue;
                }
                let fj = &complex.faces()[g];
                for &e in fi.edges() {
                    if !fj.edges().contains(&e) {
                        continue;
                    }
                    let edge = complex.edges()[e];
                    // A shared edge must be walked in opposite directions.
                    let want = -eps[i] * fi.traversal(edge.tail, edge.head) * fj.traversal(edge.tail, edge.head);
                    if eps[j] == 0 {
                        eps[j] = want;
                        queue.push_back(j);
                    } else if eps[j] != want {
                        return Err(Error::InconsistentOrientation { cell });
                    }
                }
            }
        }
    }

    let mut centre = Vec3::zeros();
    for &f in faces {
        centre += complex.faces()[f].centroid().coords;
    }
    centre /= faces.len() as f64;
    let volume: f64 = faces
        .iter()
        .zip(&eps)
        .map(|(&f, &s)| {
            let face = &complex.faces()[f];
            s as f64 * (face.centroid().coords - centre).dot(&face.normal()) * face.area() / 3.0
        })
        .sum();
    let flip = if volume < 0.0 { -1 } else { 1 };
    let signs = faces.iter().zip(&eps).map(|(&f, &s)| (f, s * flip)).collect();
    Ok((signs, volume.abs()))
}

/// Assigns every cell a direction sign, starting from the stress cell.
///
/// A sign of `+1` means the cell's faces are read with their outward
/// normals, `-1` with inward normals. Crossing an ordinary face flips the
/// relative direction of the two cells, crossing a face of the stress cell
/// keeps it. The result does not depend on the traversal order: every face
/// is checked against the assignment after the sweep.
pub fn propagate_cell_orientations(complex: &CellComplex, geometry: &CellGeometry) -> Result<Vec<i8>> {
    let order: Vec<usize> = (0..complex.faces().len()).collect();
    propagate_with_order(complex, geometry, &order)
}

/// [`propagate_cell_orientations`] with an explicit order in which the
/// faces of each visited cell are explored.
pub fn propagate_with_order(complex: &CellComplex, geometry: &CellGeometry, face_order: &[usize]) -> Result<Vec<i8>> {
    let stress = complex.stress_cell();
    let on_stress: Vec<bool> = (0..complex.faces().len())
        .map(|f| complex.face_cells(f).contains(&stress))
        .collect();
    let rank: Vec<usize> = {
        let mut r = vec![usize::MAX; complex.faces().len()];
        for (i, &f) in face_order.iter().enumerate() {
            r[f] = i;
        }
        r
    };
    let relation = |f: usize, a: usize, b: usize| -> i8 {
        let rel = if on_stress[f] { 1 } else { -1 };
        rel * geometry.sign(a, f) * geometry.sign(b, f)
    };

    let mut signs = vec![0i8; complex.cells().len()];
    signs[stress] = complex.direction().sign();
    let mut queue = VecDeque::from([stress]);
    while let Some(a) = queue.pop_front() {
        let mut faces = complex.cells()[a].faces().to_vec();
        faces.sort_by_key(|&f| rank[f]);
        for f in faces {
            for &b in complex.face_cells(f) {
                if b != a && signs[b] == 0 {
                    signs[b] = relation(f, a, b) * signs[a];
                    queue.push_back(b);
                }
            }
        }
    }

    if signs.contains(&0) {
        return Err(Error::DisconnectedComplex);
    }
    for f in 0..complex.faces().len() {
        if let [a, b] = *complex.face_cells(f) {
            if signs[b] != relation(f, a, b) * signs[a] {
                return Err(Error::InconsistentOrientation { cell: a.max(b) });
            }
        }
    }
    Ok(signs)
}

/// `C_ev`: `+1` at the head and `-1` at the tail of every active edge.
pub fn edge_vertex_matrix(complex: &CellComplex, active: &ActiveSet) -> SignedIncidence {
    let mut t = Vec::with_capacity(2 * active.edges.len());
    for (row, &e) in active.edges.iter().enumerate() {
        let edge = complex.edges()[e];
        t.push((row, edge.tail, -1));
        t.push((row, edge.head, 1));
    }
    SignedIncidence::from_triplets(active.edges.len(), complex.vertices().len(), t)
}

/// `C_ef`: `+1` when the canonical edge direction agrees with the face loop
/// oriented counter-clockwise about the face normal, `-1` when it opposes it.
pub fn edge_face_matrix(complex: &CellComplex, active: &ActiveSet) -> SignedIncidence {
    let mut t = Vec::new();
    for (col, &f) in active.faces.iter().enumerate() {
        let face = &complex.faces()[f];
        for &e in face.edges() {
            if let Some(row) = active.edge_position(e) {
                let edge = complex.edges()[e];
                t.push((row, col, face.traversal(edge.tail, edge.head)));
            }
        }
    }
    SignedIncidence::from_triplets(active.edges.len(), active.faces.len(), t)
}

/// `C_fc`: `+1` when the face normal agrees with the direction of the cell
/// for that face, `-1` when it opposes it.
pub fn face_cell_matrix(active: &ActiveSet, geometry: &CellGeometry, signs: &[i8]) -> SignedIncidence {
    let mut t = Vec::new();
    for (col, &c) in active.cells.iter().enumerate() {
        for &(f, rho) in &geometry.outward[c] {
            if let Some(row) = active.face_position(f) {
                t.push((row, col, signs[c] * rho));
            }
        }
    }
    SignedIncidence::from_triplets(active.faces.len(), active.cells.len(), t)
}

/// The three incidence matrices of a complex together with the cell
/// orientation data they were derived from.
#[derive(Clone, Debug)]
pub struct IncidenceSet {
    pub active: ActiveSet,
    pub edge_vertex: SignedIncidence,
    pub edge_face: SignedIncidence,
    pub face_cell: SignedIncidence,
    pub geometry: CellGeometry,
    /// Direction sign of every cell, indexed by cell id.
    pub cell_signs: Vec<i8>,
}

impl IncidenceSet {
    pub fn new(complex: &CellComplex) -> Result<Self> {
        let active = complex.active();
        let geometry = CellGeometry::new(complex)?;
        let cell_signs = propagate_cell_orientations(complex, &geometry)?;
        Ok(IncidenceSet {
            edge_vertex: edge_vertex_matrix(complex, &active),
            edge_face: edge_face_matrix(complex, &active),
            face_cell: face_cell_matrix(&active, &geometry, &cell_signs),
            active,
            geometry,
            cell_signs,
        })
    }
}
