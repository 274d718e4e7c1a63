//! Command line and HTTP front end for [`polyrecip`].
//!
//! The binary is a thin shell over [`session::Session`], which owns a loaded
//! primal and its equilibrium system, and [`http::router`], which exposes the
//! same session over JSON.

pub mod http;
pub mod session;

use std::path::Path;

use anyhow::Context;
use polyrecip::complex::{validate, Check, ComplexDocument, Counts, Issue, PLANARITY_TOLERANCE};
use polyrecip::{CellComplex, Error};
use serde::Serialize;

pub use session::{exit_code, DualDocument, Session, SolveRequest};

/// Reads a complex document without validating it.
pub fn read_document(path: &Path) -> anyhow::Result<ComplexDocument> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = serde_json::from_str(&text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    Ok(doc)
}

/// Reads and validates a complex.
pub fn load(path: &Path) -> anyhow::Result<CellComplex> {
    Ok(read_document(path)?.build()?)
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub ok: bool,
    pub counts: Option<Counts>,
    /// One entry per named check; empty when the document could not be built.
    pub checks: Vec<CheckResult>,
    pub issues: Vec<Issue>,
    /// Set when the document is structurally broken before any check runs.
    pub error: Option<ErrorBody>,
}

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub check: Check,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub code: &'static str,
    pub message: String,
}

impl From<&Error> for ErrorBody {
    fn from(err: &Error) -> Self {
        ErrorBody { code: err.code(), message: err.to_string() }
    }
}

/// Runs every check on a document and collects the results.
pub fn check_document(doc: ComplexDocument) -> CheckReport {
    let complex = match doc.build_unchecked() {
        Ok(c) => c,
        Err(err) => {
            return CheckReport {
                ok: false,
                counts: None,
                checks: Vec::new(),
                issues: Vec::new(),
                error: Some((&err).into()),
            }
        }
    };
    let report = validate(&complex, PLANARITY_TOLERANCE);
    CheckReport {
        ok: report.is_ok(),
        counts: Some(complex.counts()),
        checks: Check::ALL.iter().map(|&check| CheckResult { check, passed: report.passed(check) }).collect(),
        issues: report.issues,
        error: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use polyrecip::fixtures::tetra_fixture;

    #[test]
    fn check_reports_every_named_check() {
        let report = check_document(tetra_fixture().to_document());
        assert!(report.ok);
        assert_eq!(report.checks.len(), Check::ALL.len());
        assert!(report.checks.iter().all(|r| r.passed));
    }

    #[test]
    fn bent_face_fails_planarity_only() {
        let mut doc = polyrecip::fixtures::box_grid([1, 1, 1]).to_document();
        doc.vertices[0][0] += 1e-3;
        let report = check_document(doc);
        assert!(!report.ok);
        for r in &report.checks {
            assert_eq!(r.passed, r.check != Check::Planarity, "{:?}", r.check);
        }
    }
}
