use serde::{Deserialize, Serialize};

use super::{validate, CellComplex, Direction, Point3, Role, PLANARITY_TOLERANCE};
use crate::error::{Error, Result};

/// On-disk form of a [`CellComplex`].
///
/// ```json
/// {"role": "form", "vertices": [[0,0,0], ...], "faces": [[0,1,2], ...],
///  "cells": [[0,1,4,6], ...], "stress_cell": 4, "direction": "inward"}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub role: Role,
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
    pub cells: Vec<Vec<usize>>,
    pub stress_cell: usize,
    pub direction: Direction,
}

impl ComplexDocument {
    /// Builds the complex without running the geometric checks.
    pub fn build_unchecked(self) -> Result<CellComplex> {
        CellComplex::new(
            self.vertices.into_iter().map(Point3::from).collect(),
            self.faces,
            self.cells,
            self.role,
            self.stress_cell,
            self.direction,
        )
    }

    /// Builds the complex and rejects it on the first failed check.
    pub fn build(self) -> Result<CellComplex> {
        let complex = self.build_unchecked()?;
        let report = validate(&complex, PLANARITY_TOLERANCE);
        match report.issues.into_iter().next() {
            Some(issue) => Err(issue.into()),
            None => Ok(complex),
        }
    }
}

/// Parses and validates a JSON complex document.
pub fn parse_complex(text: &str) -> Result<CellComplex> {
    let doc: ComplexDocument =
        serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    doc.build()
}

impl CellComplex {
    pub fn to_document(&self) -> ComplexDocument {
        ComplexDocument {
            role: self.role,
            vertices: self.vertices.iter().map(|p| [p.x, p.y, p.z]).collect(),
            faces: self.faces.iter().map(|f| f.vertices.clone()).collect(),
            cells: self.cells.iter().map(|c| c.faces.clone()).collect(),
            stress_cell: self.stress_cell,
            direction: self.direction,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("documents always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::{glued_boxes, tetra_fixture};

    #[test]
    fn round_trip_preserves_everything() {
        for c in [tetra_fixture(), glued_boxes()] {
            let back = parse_complex(&c.to_json()).unwrap();
            assert_eq!(back.to_document(), c.to_document());
            assert_eq!(back.edges(), c.edges());
            for (a, b) in back.faces().iter().zip(c.faces()) {
                assert_eq!(a.normal(), b.normal());
            }
        }
    }

    #[test]
    fn syntax_and_schema_errors_are_malformed() {
        for text in [
            "",
            "{",
            r#"{"role":"form"}"#,
            r#"{"role":"both","vertices":[],"faces":[],"cells":[],"stress_cell":0,"direction":"inward"}"#,
            r#"{"role":"form","vertices":[[0,0]],"faces":[],"cells":[],"stress_cell":0,"direction":"inward"}"#,
        ] {
            assert!(matches!(parse_complex(text), Err(Error::MalformedDocument(_))), "{text}");
        }
    }

    #[test]
    fn repeated_loop_vertex_is_malformed() {
        let mut doc = tetra_fixture().to_document();
        doc.faces[0] = vec![0, 3, 3];
        let err = parse_complex(&serde_json::to_string(&doc).unwrap()).unwrap_err();
        assert!(matches!(err, Error::MalformedDocument(_)));
    }

    #[test]
    fn first_failed_check_becomes_the_error() {
        let mut doc = tetra_fixture().to_document();
        doc.cells[0].pop();
        let err = doc.clone().build().unwrap_err();
        assert!(matches!(err, Error::OpenCell { cell: 0 } | Error::DanglingFace { .. }), "{err:?}");

        let mut doc = glued_boxes().to_document();
        doc.vertices[0][0] += 1e-3;
        assert!(matches!(doc.build(), Err(Error::NonPlanarFace { .. })));
    }
}
