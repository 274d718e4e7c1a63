//! The reciprocal diagram.
//!
//! Each active primal cell becomes a dual vertex, each active face a dual
//! edge parallel to its normal, each active edge a dual face and each active
//! vertex a dual cell. Dual edge `j` runs from the cell with `-1` in row `j`
//! of `C_fc` to the cell with `+1`, and its vector is `q_j n_j`.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::complex::{newell_normal, Counts, Direction, Point3, Role, Vec3};
use crate::equilibrium::EquilibriumSystem;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemberForce {
    Compressive,
    Tensile,
    Zero,
}

impl MemberForce {
    pub fn flipped(self) -> Self {
        match self {
            MemberForce::Compressive => MemberForce::Tensile,
            MemberForce::Tensile => MemberForce::Compressive,
            MemberForce::Zero => MemberForce::Zero,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualEdge {
    pub tail: usize,
    pub head: usize,
    /// Primal face the edge is reciprocal to.
    pub face: usize,
}

/// Which dual vertex is pinned, and where.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Anchor {
    /// Primal cell id; `None` picks the first cell other than the stress cell.
    pub cell: Option<usize>,
    pub point: Point3,
}

impl Default for Anchor {
    fn default() -> Self {
        Anchor {
            cell: None,
            point: Point3::origin(),
        }
    }
}

impl Anchor {
    pub fn cell(cell: usize) -> Self {
        Anchor {
            cell: Some(cell),
            ..Anchor::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualDiagram {
    /// Role of the dual: the opposite of the primal's.
    pub role: Role,
    pub vertices: Vec<Point3>,
    /// One loop of dual vertex indices per active primal edge.
    pub faces: Vec<Vec<usize>>,
    /// One list of dual face indices per active primal vertex.
    pub cells: Vec<Vec<usize>>,
    pub direction: Direction,
    pub edges: Vec<DualEdge>,
    pub primal_cells: Vec<usize>,
    pub primal_edges: Vec<usize>,
    pub primal_vertices: Vec<usize>,
    pub q: Vec<f64>,
    /// `q_j n_j` for every dual edge.
    pub edge_vectors: Vec<Vec3>,
    /// Primal cell whose dual vertex was pinned.
    pub anchor_cell: usize,
    /// Present when the primal is a force diagram.
    pub member_forces: Option<Vec<MemberForce>>,
}

/// `u†, v†, w†` as one vector per dual edge.
pub fn edge_vectors(sys: &EquilibriumSystem, q: &[f64]) -> Vec<Vec3> {
    q.iter().zip(sys.normals()).map(|(&q, n)| n * q).collect()
}

/// Dual edges as `(tail, head)` column pairs of `C_fc`.
fn edge_ends(sys: &EquilibriumSystem) -> Vec<(usize, usize)> {
    let fc = &sys.incidence().face_cell;
    (0..fc.shape().0)
        .map(|r| {
            let (mut tail, mut head) = (usize::MAX, usize::MAX);
            for (c, s) in fc.row(r) {
                if s > 0 {
                    head = c;
                } else {
                    tail = c;
                }
            }
            (tail, head)
        })
        .collect()
}

fn anchor_column(sys: &EquilibriumSystem, anchor: &Anchor) -> Result<usize> {
    let active = &sys.incidence().active;
    let cell = anchor.cell.unwrap_or(active.cells[0]);
    if cell >= sys.complex().cells().len() {
        return Err(Error::InvalidAnchor { cell, reason: "no such cell" });
    }
    active.cell_position(cell).ok_or(Error::InvalidAnchor {
        cell,
        reason: "the stress cell has no dual vertex",
    })
}

fn check_density(sys: &EquilibriumSystem, q: &[f64]) -> Result<()> {
    let cols = sys.analysis().cols;
    if q.len() != cols {
        return Err(Error::DimensionMismatch {
            what: "q",
            expected: cols,
            got: q.len(),
        });
    }
    if q.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("q has a non-finite entry".into()));
    }
    if q.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroSolution);
    }
    if !sys.is_balanced(q) {
        return Err(Error::Unbalanced {
            residual: sys.residual(q),
        });
    }
    Ok(())
}

impl DualDiagram {
    /// Solves `C^σ x† = (0, u†)` (and likewise for y and z), where `C^σ` is
    /// `C_fc` with a leading row selecting the anchor cell, then moves the
    /// anchor vertex onto the anchor point.
    pub fn algebraic(sys: &EquilibriumSystem, q: &[f64], anchor: Anchor) -> Result<Self> {
        check_density(sys, q)?;
        let col = anchor_column(sys, &anchor)?;
        let fc = sys.incidence().face_cell.to_dense();
        let (f, c) = fc.shape();
        let mut augmented = DMatrix::zeros(f + 1, c);
        augmented[(0, col)] = 1.0;
        augmented.view_mut((1, 0), (f, c)).copy_from(&fc);

        let normal = augmented.transpose() * &augmented;
        let chol = normal.cholesky().ok_or(Error::DisconnectedComplex)?;
        let vectors = edge_vectors(sys, q);
        let mut coords = [DVector::zeros(c), DVector::zeros(c), DVector::zeros(c)];
        for (k, x) in coords.iter_mut().enumerate() {
            let mut rhs = DVector::zeros(f + 1);
            for (j, v) in vectors.iter().enumerate() {
                rhs[j + 1] = v[k];
            }
            *x = chol.solve(&(augmented.transpose() * rhs));
        }
        let pinned = Vec3::new(coords[0][col], coords[1][col], coords[2][col]);
        let vertices = (0..c)
            .map(|i| match i == col {
                true => anchor.point,
                false => anchor.point + (Vec3::new(coords[0][i], coords[1][i], coords[2][i]) - pinned),
            })
            .collect();
        Self::assemble(sys, q, vertices, col)
    }

    /// Places the anchor vertex and walks breadth-first across the dual
    /// edges, stepping by `q_j n_j` or its negative.
    pub fn graph_search(sys: &EquilibriumSystem, q: &[f64], anchor: Anchor) -> Result<Self> {
        check_density(sys, q)?;
        let col = anchor_column(sys, &anchor)?;
        let ends = edge_ends(sys);
        let vectors = edge_vectors(sys, q);
        let n = sys.incidence().active.cells.len();
        let mut around = vec![Vec::new(); n];
        for (j, &(t, h)) in ends.iter().enumerate() {
            around[t].push(j);
            around[h].push(j);
        }

        let mut placed: Vec<Option<Point3>> = vec![None; n];
        placed[col] = Some(anchor.point);
        let mut queue = VecDeque::from([col]);
        while let Some(a) = queue.pop_front() {
            let here = placed[a].expect("queued vertices are placed");
            for &j in &around[a] {
                let (t, h) = ends[j];
                let (b, step) = if t == a { (h, vectors[j]) } else { (t, -vectors[j]) };
                if placed[b].is_none() {
                    placed[b] = Some(here + step);
                    queue.push_back(b);
                }
            }
        }
        let vertices = placed
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::DisconnectedComplex)?;
        Self::assemble(sys, q, vertices, col)
    }

    fn assemble(sys: &EquilibriumSystem, q: &[f64], vertices: Vec<Point3>, anchor_col: usize) -> Result<Self> {
        let complex = sys.complex();
        let active = &sys.incidence().active;
        let ends = edge_ends(sys);
        let edges = ends
            .iter()
            .zip(&active.faces)
            .map(|(&(tail, head), &face)| DualEdge { tail, head, face })
            .collect();

        let faces = dual_faces(sys, &ends)?;
        let cells = active
            .vertices
            .iter()
            .map(|&v| {
                (0..active.edges.len())
                    .filter(|&i| {
                        let e = complex.edges()[active.edges[i]];
                        e.tail == v || e.head == v
                    })
                    .collect()
            })
            .collect();

        let mut dual = DualDiagram {
            role: complex.role().dual(),
            vertices,
            faces,
            cells,
            direction: complex.direction(),
            edges,
            primal_cells: active.cells.clone(),
            primal_edges: active.edges.clone(),
            primal_vertices: active.vertices.clone(),
            q: q.to_vec(),
            edge_vectors: edge_vectors(sys, q),
            anchor_cell: active.cells[anchor_col],
            member_forces: None,
        };
        if complex.role() == Role::Force {
            dual.member_forces = Some(classify_members(sys, &dual)?);
        }
        Ok(dual)
    }

    /// `(v†, e†, f†, c†)`.
    pub fn counts(&self) -> Counts {
        Counts {
            vertices: self.vertices.len(),
            edges: self.edges.len(),
            faces: self.faces.len(),
            cells: self.cells.len(),
        }
    }

    /// Area of every dual face. Reported for display; nothing constrains it.
    pub fn face_areas(&self) -> Vec<f64> {
        self.faces
            .iter()
            .map(|lp| {
                let pts: Vec<Vec3> = lp.iter().map(|&v| self.vertices[v].coords).collect();
                newell_normal(pts.iter().copied()).norm() / 2.0
            })
            .collect()
    }

    /// `x(head) - x(tail)` of every dual edge.
    pub fn positional_vectors(&self) -> Vec<Vec3> {
        self.edges
            .iter()
            .map(|e| self.vertices[e.head] - self.vertices[e.tail])
            .collect()
    }
}

/// Walks the faces and cells around every active primal edge. Consecutive
/// faces around an edge share a cell, so the walk yields a closed loop of
/// dual vertices. The loop is turned so that each dual edge is traversed with
/// the sign it has in `C_ef`.
fn dual_faces(sys: &EquilibriumSystem, ends: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    let ef = &sys.incidence().edge_face;
    let active = &sys.incidence().active;
    let mut faces = Vec::with_capacity(ef.shape().0);
    for row in 0..ef.shape().0 {
        let ring: Vec<usize> = ef.row(row).map(|(j, _)| j).collect();
        let stuck = || Error::InconsistentOrientation {
            cell: active.cells[ends[ring[0]].0],
        };
        let start = ring[0];
        let mut vertices = vec![ends[start].0];
        let mut steps = vec![(start, 1i8)];
        let mut at = ends[start].1;
        while at != vertices[0] {
            if vertices.len() >= ring.len() {
                return Err(stuck());
            }
            vertices.push(at);
            let via = steps.last().expect("nonempty").0;
            let next = *ring
                .iter()
                .find(|&&j| j != via && (ends[j].0 == at || ends[j].1 == at))
                .ok_or_else(stuck)?;
            let forward = ends[next].0 == at;
            steps.push((next, if forward { 1 } else { -1 }));
            at = if forward { ends[next].1 } else { ends[next].0 };
        }
        if vertices.len() != ring.len() {
            return Err(stuck());
        }

        let agree = steps.iter().filter(|&&(j, s)| ef.get(row, j) == s).count();
        if agree == 0 {
            vertices.reverse();
        } else if agree != ring.len() {
            return Err(stuck());
        }
        faces.push(vertices);
    }
    Ok(faces)
}

/// Labels every dual edge from `ψ = (x(head) - x(tail)) · n`, read against
/// the direction of the global force polyhedron: with an inward GFP a
/// positive `ψ` is compressive, with an outward one it is tensile.
pub fn classify_members(sys: &EquilibriumSystem, dual: &DualDiagram) -> Result<Vec<MemberForce>> {
    if sys.complex().role() != Role::Force {
        return Err(Error::RoleMismatch);
    }
    let scale = dual.q.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let zero = sys.tolerances().zero_label * scale;
    let positive = match sys.complex().direction() {
        Direction::Inward => MemberForce::Compressive,
        Direction::Outward => MemberForce::Tensile,
    };
    Ok(dual
        .positional_vectors()
        .iter()
        .zip(sys.normals())
        .map(|(d, n)| {
            let psi = d.dot(n);
            if psi.abs() <= zero {
                MemberForce::Zero
            } else if psi > 0.0 {
                positive
            } else {
                positive.flipped()
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReciprocityReport {
    pub tolerance: f64,
    /// `‖A q‖∞ / max(1, ‖q‖∞)`.
    pub equilibrium: f64,
    /// Largest closure defect of a dual face, relative to `max(1, ‖q‖∞)`.
    pub closure: f64,
    pub open_faces: Vec<usize>,
    /// Largest angle in radians between a dual edge and its primal normal.
    pub max_angle: f64,
    pub skew_edges: Vec<usize>,
    /// Largest `|cos|` between a primal edge and the edges of its dual face.
    pub perpendicularity: f64,
    pub oblique_faces: Vec<usize>,
    /// Active primal `(v, e, f, c)`.
    pub primal_counts: Counts,
    /// Dual `(c†, f†, e†, v†)`, in primal order.
    pub dual_counts: Counts,
    pub topology_matches: bool,
}

impl ReciprocityReport {
    pub fn counts_match(&self) -> bool {
        self.primal_counts == self.dual_counts
    }

    pub fn passed(&self) -> bool {
        self.topology_matches
            && self.counts_match()
            && self.equilibrium <= self.tolerance
            && self.open_faces.is_empty()
            && self.skew_edges.is_empty()
            && self.oblique_faces.is_empty()
    }
}

/// Checks that `dual` is reciprocal to the primal of `sys`.
///
/// Dual faces are tested for closure on the components of their edges along
/// the primal normals, so a displaced dual vertex shows up even though a
/// loop of coordinate differences always sums to zero.
pub fn verify_reciprocity(sys: &EquilibriumSystem, dual: &DualDiagram, tol: f64) -> ReciprocityReport {
    let complex = sys.complex();
    let active = &sys.incidence().active;
    let primal_counts = active.counts();
    let dual_counts = Counts {
        vertices: dual.cells.len(),
        edges: dual.faces.len(),
        faces: dual.edges.len(),
        cells: dual.vertices.len(),
    };
    let ends = edge_ends(sys);
    let topology_matches = primal_counts == dual_counts
        && dual.q.len() == ends.len()
        && dual
            .edges
            .iter()
            .zip(ends.iter().zip(&active.faces))
            .all(|(d, (&(t, h), &f))| (d.tail, d.head, d.face) == (t, h, f))
        && dual.faces.iter().all(|lp| lp.iter().all(|&v| v < dual.vertices.len()));

    let mut report = ReciprocityReport {
        tolerance: tol,
        equilibrium: f64::INFINITY,
        closure: f64::INFINITY,
        open_faces: Vec::new(),
        max_angle: f64::INFINITY,
        skew_edges: Vec::new(),
        perpendicularity: f64::INFINITY,
        oblique_faces: Vec::new(),
        primal_counts,
        dual_counts,
        topology_matches,
    };
    if !topology_matches {
        return report;
    }

    let scale = dual.q.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    report.equilibrium = sys.residual(&dual.q) / scale;
    let d = dual.positional_vectors();
    let normals = sys.normals();

    report.closure = 0.0;
    for row in 0..active.edges.len() {
        let sum: Vec3 = sys
            .incidence()
            .edge_face
            .row(row)
            .map(|(j, s)| normals[j] * (s as f64 * d[j].dot(&normals[j])))
            .sum();
        let defect = sum.norm() / scale;
        report.closure = report.closure.max(defect);
        if defect > tol {
            report.open_faces.push(row);
        }
    }

    report.max_angle = 0.0;
    for (j, (dj, n)) in d.iter().zip(normals).enumerate() {
        if dual.q[j].abs() <= 1e-9 {
            continue;
        }
        let cross = dj.cross(n).norm();
        report.max_angle = report.max_angle.max(cross.atan2(dj.dot(n).abs()));
        if cross > tol * dual.q[j].abs() {
            report.skew_edges.push(j);
        }
    }

    report.perpendicularity = 0.0;
    let tiny = 1e-9 * scale;
    for (row, &e) in active.edges.iter().enumerate() {
        let edge = complex.edges()[e];
        let t = (complex.vertices()[edge.head] - complex.vertices()[edge.tail]).normalize();
        let mut worst = 0.0f64;
        for (j, _) in sys.incidence().edge_face.row(row) {
            if d[j].norm() > tiny {
                worst = worst.max(t.dot(&d[j].normalize()).abs());
            }
        }
        report.perpendicularity = report.perpendicularity.max(worst);
        if worst > tol {
            report.oblique_faces.push(row);
        }
    }
    report
}
