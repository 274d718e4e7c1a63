//! Requests and responses shared by the command line and the HTTP service.

use polyrecip::complex::{ComplexDocument, Counts};
use polyrecip::solvers::{self, Warning};
use polyrecip::{
    verify_reciprocity, Anchor, AnalysisReport, CellComplex, DualDiagram, EquilibriumSystem, Error, Method, Point3,
    ReciprocityReport, Result, SolverParams,
};
use serde::{Deserialize, Serialize};

/// Tolerance the reciprocity report is checked against before a response
/// is marked as degraded.
pub const RECIPROCITY_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveRequest {
    pub method: Method,
    #[serde(default)]
    pub xi: Option<Vec<f64>>,
    #[serde(default)]
    pub zeta: Option<Vec<f64>>,
    #[serde(default)]
    pub lambda: Option<Vec<f64>>,
    #[serde(default)]
    pub anchor_cell: Option<usize>,
    #[serde(default)]
    pub anchor_point: Option<[f64; 3]>,
}

impl SolveRequest {
    pub fn new(method: Method) -> Self {
        SolveRequest {
            method,
            xi: None,
            zeta: None,
            lambda: None,
            anchor_cell: None,
            anchor_point: None,
        }
    }

    /// The vector for the chosen method. A vector meant for another method
    /// is rejected rather than silently ignored.
    pub fn params(&self) -> Result<SolverParams> {
        let stray = match self.method {
            Method::Mpi => [("zeta", &self.zeta), ("lambda", &self.lambda)],
            Method::Rref => [("xi", &self.xi), ("lambda", &self.lambda)],
            Method::Lp => [("xi", &self.xi), ("zeta", &self.zeta)],
        };
        if let Some((name, _)) = stray.iter().find(|(_, v)| v.is_some()) {
            return Err(Error::InvalidParameter(format!(
                "{name} does not apply to method {}",
                method_name(self.method)
            )));
        }
        Ok(SolverParams {
            xi: self.xi.clone(),
            zeta: self.zeta.clone(),
            lambda: self.lambda.clone(),
        })
    }

    pub fn anchor(&self) -> Anchor {
        Anchor {
            cell: self.anchor_cell,
            point: self.anchor_point.map(Point3::from).unwrap_or_else(Point3::origin),
        }
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Mpi => "mpi",
        Method::Rref => "rref",
        Method::Lp => "lp",
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `‖A q‖∞ / max(1, ‖q‖∞)`.
    pub equilibrium: f64,
    /// Largest dual face closure error.
    pub closure: f64,
    /// Largest angle (radians) between a dual edge and its primal normal.
    pub max_angle: f64,
    /// Largest `|cos|` between a primal edge and its dual face.
    pub perpendicularity: f64,
}

/// The dual document written by `solve` and returned by `POST /api/solve`.
///
/// It carries the dual complex in the same shape as an input document
/// (`role`, `vertices`, `faces`, `cells`, `direction`) plus `q`,
/// `member_forces` and `residuals`, and the bookkeeping needed to check it
/// against the primal again.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualDocument {
    #[serde(flatten)]
    pub dual: DualDiagram,
    pub method: Method,
    pub dof: usize,
    pub independent_faces: Vec<usize>,
    pub residuals: Residuals,
    pub reciprocity: ReciprocityReport,
    /// Set when the reciprocity checks fail at [`RECIPROCITY_TOLERANCE`].
    pub degraded: bool,
    pub warning: Option<Warning>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisView {
    pub counts: Counts,
    pub active_counts: Counts,
    #[serde(flatten)]
    pub report: AnalysisReport,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexView {
    #[serde(flatten)]
    pub document: ComplexDocument,
    pub edges: Vec<[usize; 2]>,
    pub active_faces: Vec<usize>,
}

/// A loaded primal together with its equilibrium system. Immutable, so one
/// session can serve any number of concurrent solves.
#[derive(Debug)]
pub struct Session {
    system: EquilibriumSystem,
}

impl Session {
    pub fn new(complex: &CellComplex) -> Result<Self> {
        Ok(Session { system: EquilibriumSystem::new(complex)? })
    }

    pub fn complex(&self) -> &CellComplex {
        self.system.complex()
    }

    pub fn system(&self) -> &EquilibriumSystem {
        &self.system
    }

    pub fn complex_view(&self) -> ComplexView {
        let c = self.complex();
        ComplexView {
            document: c.to_document(),
            edges: c.edges().iter().map(|e| [e.tail, e.head]).collect(),
            active_faces: self.system.incidence().active.faces.clone(),
        }
    }

    pub fn analysis(&self) -> AnalysisView {
        let report = self.system.analysis().clone();
        let mut warnings = Vec::new();
        if report.collapses {
            warnings.push("dual collapses to a point: only q = 0 is in equilibrium".to_string());
        }
        AnalysisView {
            counts: self.complex().counts(),
            active_counts: self.system.incidence().active.counts(),
            report,
            warnings,
        }
    }

    pub fn solve(&self, request: &SolveRequest) -> Result<DualDocument> {
        let params = request.params()?;
        let q = solvers::solve(&self.system, request.method, &params)?;
        let dual = DualDiagram::algebraic(&self.system, &q.q, request.anchor())?;
        let reciprocity = verify_reciprocity(&self.system, &dual, RECIPROCITY_TOLERANCE);
        let analysis = self.system.analysis();
        Ok(DualDocument {
            method: request.method,
            dof: analysis.dof,
            independent_faces: analysis.independent_faces.clone(),
            residuals: Residuals {
                equilibrium: q.residual,
                closure: reciprocity.closure,
                max_angle: reciprocity.max_angle,
                perpendicularity: reciprocity.perpendicularity,
            },
            degraded: !reciprocity.passed(),
            reciprocity,
            warning: q.warning,
            dual,
        })
    }
}

/// Process exit status for a failed command.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::MalformedDocument(_)
        | Error::NonPlanarFace { .. }
        | Error::OpenCell { .. }
        | Error::DanglingFace { .. } => 2,
        Error::Infeasible => 3,
        Error::ZeroDof => 4,
        Error::DimensionMismatch { .. } => 5,
        _ => 1,
    }
}
