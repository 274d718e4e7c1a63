use std::collections::HashMap;

use serde::Serialize;

use super::CellComplex;
use crate::error::Error;

/// Relative planarity tolerance used when parsing documents.
pub const PLANARITY_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Planarity,
    TwoCellsPerFace,
    CellClosure,
    CanonicalEdges,
}

impl Check {
    pub const ALL: [Check; 4] = [
        Check::Planarity,
        Check::TwoCellsPerFace,
        Check::CellClosure,
        Check::CanonicalEdges,
    ];
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Issue {
    NonPlanarFace { face: usize, deviation: f64 },
    DanglingFace { face: usize, cells: usize },
    OpenCell { cell: usize },
    NonCanonicalEdge { edge: usize },
}

impl Issue {
    pub fn check(&self) -> Check {
        match self {
            Issue::NonPlanarFace { .. } => Check::Planarity,
            Issue::DanglingFace { .. } => Check::TwoCellsPerFace,
            Issue::OpenCell { .. } => Check::CellClosure,
            Issue::NonCanonicalEdge { .. } => Check::CanonicalEdges,
        }
    }
}

impl From<Issue> for Error {
    fn from(issue: Issue) -> Self {
        match issue {
            Issue::NonPlanarFace { face, deviation } => Error::NonPlanarFace { face, deviation },
            Issue::DanglingFace { face, cells } => Error::DanglingFace { face, cells },
            Issue::OpenCell { cell } => Error::OpenCell { cell },
            Issue::NonCanonicalEdge { edge } => {
                Error::MalformedDocument(format!("edge {edge} is not stored tail < head"))
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    /// Absolute planarity threshold that was applied.
    pub planarity_threshold: f64,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn passed(&self, check: Check) -> bool {
        self.issues.iter().all(|i| i.check() != check)
    }

    pub fn failures(&self, check: Check) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(move |i| i.check() == check)
    }
}

/// Runs every structural check. `tol` is relative to the bounding-box
/// diagonal of the vertices.
pub fn validate(complex: &CellComplex, tol: f64) -> ValidationReport {
    let threshold = tol * complex.bounding_diagonal();
    let mut issues = Vec::new();

    for (f, face) in complex.faces().iter().enumerate() {
        let deviation = face.plane_deviation(complex.vertices());
        if deviation > threshold {
            issues.push(Issue::NonPlanarFace { face: f, deviation });
        }
    }

    for f in 0..complex.faces().len() {
        let cells = complex.face_cells(f).len();
        if cells != 2 {
            issues.push(Issue::DanglingFace { face: f, cells });
        }
    }

    for (c, cell) in complex.cells().iter().enumerate() {
        let mut uses: HashMap<usize, usize> = HashMap::new();
        for &f in cell.faces() {
            for &e in complex.faces()[f].edges() {
                *uses.entry(e).or_default() += 1;
            }
        }
        if uses.values().any(|&n| n != 2) {
            issues.push(Issue::OpenCell { cell: c });
        }
    }

    for (i, e) in complex.edges().iter().enumerate() {
        if e.tail >= e.head {
            issues.push(Issue::NonCanonicalEdge { edge: i });
        }
    }

    ValidationReport {
        planarity_threshold: threshold,
        issues,
    }
}
