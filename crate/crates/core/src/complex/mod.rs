//! The primal polyhedral cell complex.
//!
//! A [`CellComplex`] is a closed complex: every face bounds exactly two cells,
//! one of which is the unbounded exterior cell. Edges are derived from the face
//! loops and always point from the smaller to the larger vertex index. Face
//! normals come from Newell's method and are sign-canonicalized so that their
//! first non-negligible coordinate is positive.
//!
//! One cell is designated the stress cell: the self-stress polyhedron when the
//! complex is read as a form diagram, the global force polyhedron when it is
//! read as a force diagram. The stress cell, its faces and its edges take no
//! part in the equilibrium system; see [`ActiveSet`].

mod document;
pub mod fixtures;
mod validate;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use document::{parse_complex, ComplexDocument};
pub use validate::{validate, Check, Issue, ValidationReport, PLANARITY_TOLERANCE};

pub type Point3 = nalgebra::Point3<f64>;
pub type Vec3 = nalgebra::Vector3<f64>;

/// Normal coordinates smaller than this are skipped when picking the sign.
const CANONICAL_EPS: f64 = 1e-12;

/// How the primal is interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Form,
    Force,
}

impl Role {
    /// The role the reciprocal diagram plays.
    pub fn dual(self) -> Role {
        match self {
            Role::Form => Role::Force,
            Role::Force => Role::Form,
        }
    }
}

/// Direction of the stress cell's faces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Inward,
    Outward,
}

impl Direction {
    pub fn sign(self) -> i8 {
        match self {
            Direction::Inward => -1,
            Direction::Outward => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    fn canonical(a: usize, b: usize) -> Self {
        Edge {
            tail: a.min(b),
            head: a.max(b),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Face {
    vertices: Vec<usize>,
    edges: Vec<usize>,
    normal: Vec3,
    /// +1 when `vertices` runs counter-clockwise about `normal`.
    winding: i8,
    area: f64,
    centroid: Point3,
}

impl Face {
    /// The loop exactly as it was given.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Edge ids along the given loop; `edges()[i]` joins `vertices()[i]` and
    /// `vertices()[i + 1]`.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn normal(&self) -> Vec3 {
        self.normal
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn centroid(&self) -> Point3 {
        self.centroid
    }

    /// The loop re-ordered so that it runs counter-clockwise about the normal.
    pub fn oriented_loop(&self) -> Vec<usize> {
        if self.winding > 0 {
            self.vertices.clone()
        } else {
            self.vertices.iter().rev().copied().collect()
        }
    }

    /// Sign of the traversal of the directed pair `(a, b)` by the oriented
    /// loop: +1 if the loop visits `a` then `b`, -1 for `b` then `a`, 0 if the
    /// pair is not a side of the face.
    pub fn traversal(&self, a: usize, b: usize) -> i8 {
        let n = self.vertices.len();
        for i in 0..n {
            let (p, q) = (self.vertices[i], self.vertices[(i + 1) % n]);
            if (p, q) == (a, b) {
                return self.winding;
            }
            if (p, q) == (b, a) {
                return -self.winding;
            }
        }
        0
    }

    /// Largest distance of a loop vertex from the plane through the centroid
    /// with the face normal.
    pub fn plane_deviation(&self, points: &[Point3]) -> f64 {
        self.vertices
            .iter()
            .map(|&v| (points[v] - self.centroid).dot(&self.normal).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    faces: Vec<usize>,
}

impl Cell {
    pub fn faces(&self) -> &[usize] {
        &self.faces
    }
}

/// Element counts `(v, e, f, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub cells: usize,
}

impl Counts {
    pub fn as_tuple(&self) -> (usize, usize, usize, usize) {
        (self.vertices, self.edges, self.faces, self.cells)
    }
}

/// The part of the complex that takes part in the equilibrium system: every
/// cell but the stress cell, every face not on the stress cell, every edge not
/// on the stress cell, and the vertices those edges touch. All lists are in
/// increasing id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActiveSet {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub faces: Vec<usize>,
    pub cells: Vec<usize>,
    edge_pos: Vec<Option<usize>>,
    face_pos: Vec<Option<usize>>,
    cell_pos: Vec<Option<usize>>,
}

impl ActiveSet {
    pub fn counts(&self) -> Counts {
        Counts {
            vertices: self.vertices.len(),
            edges: self.edges.len(),
            faces: self.faces.len(),
            cells: self.cells.len(),
        }
    }

    /// Row of edge `id` in the active numbering.
    pub fn edge_position(&self, id: usize) -> Option<usize> {
        self.edge_pos.get(id).copied().flatten()
    }

    pub fn face_position(&self, id: usize) -> Option<usize> {
        self.face_pos.get(id).copied().flatten()
    }

    pub fn cell_position(&self, id: usize) -> Option<usize> {
        self.cell_pos.get(id).copied().flatten()
    }
}

fn positions(ids: &[usize], len: usize) -> Vec<Option<usize>> {
    let mut pos = vec![None; len];
    for (i, &id) in ids.iter().enumerate() {
        pos[id] = Some(i);
    }
    pos
}

/// Immutable primal complex. Construct with [`CellComplex::new`] (structural
/// checks only) or [`parse_complex`] (fully validated).
#[derive(Clone, Debug)]
pub struct CellComplex {
    vertices: Vec<Point3>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    cells: Vec<Cell>,
    role: Role,
    stress_cell: usize,
    direction: Direction,
    edge_lookup: HashMap<(usize, usize), usize>,
    face_cells: Vec<Vec<usize>>,
}

impl CellComplex {
    /// Builds a complex from raw parts. Only structural problems (indices out
    /// of range, repeated loop vertices, degenerate faces, ...) are rejected
    /// here; geometric and topological validity is reported by [`validate`].
    pub fn new(
        vertices: Vec<Point3>,
        face_loops: Vec<Vec<usize>>,
        cells: Vec<Vec<usize>>,
        role: Role,
        stress_cell: usize,
        direction: Direction,
    ) -> Result<Self> {
        let malformed = |msg: String| Err(Error::MalformedDocument(msg));

        if vertices.is_empty() {
            return malformed("no vertices".into());
        }
        if let Some(v) = vertices.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
            return malformed(format!("vertex {v} has a non-finite coordinate"));
        }
        if stress_cell >= cells.len() {
            return malformed(format!(
                "stress cell {stress_cell} out of range ({} cells)",
                cells.len()
            ));
        }

        let diag = bounding_diagonal(&vertices);
        let mut edges = Vec::new();
        let mut edge_lookup = HashMap::new();
        let mut faces = Vec::with_capacity(face_loops.len());

        for (fi, lp) in face_loops.into_iter().enumerate() {
            if lp.len() < 3 {
                return malformed(format!("face {fi} has fewer than 3 vertices"));
            }
            if let Some(&v) = lp.iter().find(|&&v| v >= vertices.len()) {
                return malformed(format!("face {fi} references missing vertex {v}"));
            }
            for (i, &v) in lp.iter().enumerate() {
                if lp[i + 1..].contains(&v) {
                    return malformed(format!("face {fi} repeats vertex {v}"));
                }
            }

            let n = lp.len();
            let mut face_edges = Vec::with_capacity(n);
            for i in 0..n {
                let e = Edge::canonical(lp[i], lp[(i + 1) % n]);
                let id = *edge_lookup.entry((e.tail, e.head)).or_insert_with(|| {
                    edges.push(e);
                    edges.len() - 1
                });
                face_edges.push(id);
            }

            let centroid = Point3::from(
                lp.iter().map(|&v| vertices[v].coords).sum::<Vec3>() / n as f64,
            );
            let newell = newell_normal(lp.iter().map(|&v| vertices[v] - centroid));
            let norm = newell.norm();
            if !(norm > 1e-14 * diag * diag) {
                return malformed(format!("face {fi} has zero area"));
            }
            let mut normal = newell / norm;
            let mut winding = 1;
            if let Some(c) = normal.iter().find(|c| c.abs() > CANONICAL_EPS) {
                if *c < 0.0 {
                    normal = -normal;
                    winding = -1;
                }
            }
            faces.push(Face {
                vertices: lp,
                edges: face_edges,
                normal,
                winding,
                area: norm / 2.0,
                centroid,
            });
        }

        let mut face_cells = vec![Vec::new(); faces.len()];
        let mut cell_list = Vec::with_capacity(cells.len());
        for (ci, fs) in cells.into_iter().enumerate() {
            if fs.is_empty() {
                return malformed(format!("cell {ci} has no faces"));
            }
            for (i, &f) in fs.iter().enumerate() {
                if f >= faces.len() {
                    return malformed(format!("cell {ci} references missing face {f}"));
                }
                if fs[i + 1..].contains(&f) {
                    return malformed(format!("cell {ci} lists face {f} twice"));
                }
                face_cells[f].push(ci);
            }
            cell_list.push(Cell { faces: fs });
        }

        Ok(CellComplex {
            vertices,
            edges,
            faces,
            cells: cell_list,
            role,
            stress_cell,
            direction,
            edge_lookup,
            face_cells,
        })
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn stress_cell(&self) -> usize {
        self.stress_cell
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Id of the edge joining `a` and `b`, in either order.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_lookup.get(&(a.min(b), a.max(b))).copied()
    }

    /// Cells that list face `f`.
    pub fn face_cells(&self, f: usize) -> &[usize] {
        &self.face_cells[f]
    }

    /// Faces containing edge `e`.
    pub fn edge_faces(&self, e: usize) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&f| self.faces[f].edges.contains(&e))
            .collect()
    }

    pub fn counts(&self) -> Counts {
        Counts {
            vertices: self.vertices.len(),
            edges: self.edges.len(),
            faces: self.faces.len(),
            cells: self.cells.len(),
        }
    }

    pub fn bounding_diagonal(&self) -> f64 {
        bounding_diagonal(&self.vertices)
    }

    pub fn active(&self) -> ActiveSet {
        let stress = &self.cells[self.stress_cell];
        let mut on_stress_face = vec![false; self.faces.len()];
        let mut on_stress_edge = vec![false; self.edges.len()];
        for &f in &stress.faces {
            on_stress_face[f] = true;
            for &e in &self.faces[f].edges {
                on_stress_edge[e] = true;
            }
        }
        let edges: Vec<usize> = (0..self.edges.len()).filter(|&e| !on_stress_edge[e]).collect();
        let faces: Vec<usize> = (0..self.faces.len()).filter(|&f| !on_stress_face[f]).collect();
        let cells: Vec<usize> = (0..self.cells.len())
            .filter(|&c| c != self.stress_cell)
            .collect();
        let mut touched = vec![false; self.vertices.len()];
        for &e in &edges {
            touched[self.edges[e].tail] = true;
            touched[self.edges[e].head] = true;
        }
        let vertices: Vec<usize> = (0..self.vertices.len()).filter(|&v| touched[v]).collect();

        ActiveSet {
            edge_pos: positions(&edges, self.edges.len()),
            face_pos: positions(&faces, self.faces.len()),
            cell_pos: positions(&cells, self.cells.len()),
            vertices,
            edges,
            faces,
            cells,
        }
    }

    /// Same complex, reinterpreted with another stress cell, role or direction.
    pub fn with_stress(&self, role: Role, stress_cell: usize, direction: Direction) -> Result<Self> {
        if stress_cell >= self.cells.len() {
            return Err(Error::MalformedDocument(format!(
                "stress cell {stress_cell} out of range ({} cells)",
                self.cells.len()
            )));
        }
        Ok(CellComplex {
            role,
            stress_cell,
            direction,
            ..self.clone()
        })
    }

    /// Same complex with the normal of face `f` pointing the other way.
    pub fn with_flipped_normal(&self, f: usize) -> Self {
        let mut out = self.clone();
        let face = &mut out.faces[f];
        face.normal = -face.normal;
        face.winding = -face.winding;
        out
    }

    /// Applies `map` to every vertex and rebuilds the derived data.
    pub fn map_vertices(&self, map: impl Fn(&Point3) -> Point3) -> Result<Self> {
        CellComplex::new(
            self.vertices.iter().map(map).collect(),
            self.faces.iter().map(|f| f.vertices.clone()).collect(),
            self.cells.iter().map(|c| c.faces.clone()).collect(),
            self.role,
            self.stress_cell,
            self.direction,
        )
    }
}

/// Newell's method; returns twice the area times the unit normal of the loop.
pub(crate) fn newell_normal(points: impl Iterator<Item = Vec3> + Clone) -> Vec3 {
    let first = points.clone().next();
    let next = points.clone().skip(1).chain(first);
    points.zip(next).fold(Vec3::zeros(), |acc, (a, b)| {
        acc + Vec3::new(
            (a.y - b.y) * (a.z + b.z),
            (a.z - b.z) * (a.x + b.x),
            (a.x - b.x) * (a.y + b.y),
        )
    })
}

fn bounding_diagonal(points: &[Point3]) -> f64 {
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for p in points {
        lo = lo.inf(&p.coords);
        hi = hi.sup(&p.coords);
    }
    (hi - lo).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Point3> {
        vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        ]
    }

    fn single_face(lp: Vec<usize>) -> Result<CellComplex> {
        CellComplex::new(square(), vec![lp], vec![vec![0]], Role::Form, 0, Direction::Inward)
    }

    #[test]
    fn newell_matches_right_hand_rule() {
        let c = single_face(vec![0, 1, 2, 3]).unwrap();
        let f = &c.faces()[0];
        assert_eq!(f.normal(), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(f.area(), 1.0);
        assert_eq!(f.oriented_loop(), vec![0, 1, 2, 3]);
        assert_eq!(f.traversal(0, 1), 1);
        assert_eq!(f.traversal(1, 0), -1);
        assert_eq!(f.traversal(0, 2), 0);
    }

    #[test]
    fn clockwise_loop_is_canonicalized() {
        let c = single_face(vec![0, 3, 2, 1]).unwrap();
        let f = &c.faces()[0];
        assert_eq!(f.normal(), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(f.oriented_loop(), vec![1, 2, 3, 0]);
        assert_eq!(f.traversal(0, 1), 1);
    }

    #[test]
    fn edges_are_canonical_and_deduplicated() {
        let c = single_face(vec![2, 1, 0, 3]).unwrap();
        let edges: Vec<(usize, usize)> = c.edges().iter().map(|e| (e.tail, e.head)).collect();
        assert_eq!(edges, vec![(1, 2), (0, 1), (0, 3), (2, 3)]);
        assert_eq!(c.edge_between(3, 0), Some(2));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(single_face(vec![0, 1, 1, 2]), Err(Error::MalformedDocument(_))));
        assert!(matches!(single_face(vec![0, 1]), Err(Error::MalformedDocument(_))));
        assert!(matches!(single_face(vec![0, 1, 9]), Err(Error::MalformedDocument(_))));
        let collinear = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(2.0, 0.0, 0.0),
        ];
        let err = CellComplex::new(collinear, vec![vec![0, 1, 2]], vec![vec![0]], Role::Form, 0, Direction::Inward);
        assert!(matches!(err, Err(Error::MalformedDocument(_))));
        let err = CellComplex::new(square(), vec![vec![0, 1, 2]], vec![vec![0, 0]], Role::Form, 0, Direction::Inward);
        assert!(matches!(err, Err(Error::MalformedDocument(_))));
        let err = CellComplex::new(square(), vec![vec![0, 1, 2]], vec![vec![0]], Role::Form, 3, Direction::Inward);
        assert!(matches!(err, Err(Error::MalformedDocument(_))));
    }

    #[test]
    fn flipping_a_normal_reverses_traversal() {
        let c = single_face(vec![0, 1, 2, 3]).unwrap();
        let flipped = c.with_flipped_normal(0);
        assert_eq!(flipped.faces()[0].normal(), -c.faces()[0].normal());
        assert_eq!(flipped.faces()[0].traversal(0, 1), -1);
    }
}
