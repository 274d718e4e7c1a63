//! Density vectors `q` with `A q = 0`.
//!
//! Three routes to the same nullspace:
//!
//! * [`solve_mpi`] projects a seed `ξ` onto the nullspace, `q = (I - A⁺A) ξ`;
//! * [`solve_rref`] fixes the independent entries to `ζ` and back-substitutes
//!   the rest from the reduced row echelon form;
//! * [`solve_lp`] looks for the cheapest `q ≥ 1` under positive weights `λ`.

mod lp;
mod pinv;
mod rref;

use serde::{Deserialize, Serialize};

use crate::equilibrium::EquilibriumSystem;
use crate::error::{Error, Result};

pub use lp::solve_lp;
pub use pinv::{pseudoinverse, solve_mpi};
pub use rref::{rref, solve_rref, Rref};

/// Non-fatal conditions attached to a solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Warning {
    /// The solution is `q = 0`; no dual can be drawn from it.
    ZeroSolution,
}

/// One signed length per active primal face, i.e. per dual edge, in column
/// order of `A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityVector {
    pub q: Vec<f64>,
    /// `‖A q‖∞` of the returned vector.
    pub residual: f64,
    pub warning: Option<Warning>,
}

impl DensityVector {
    pub(crate) fn new(sys: &EquilibriumSystem, q: Vec<f64>) -> Self {
        let residual = sys.residual(&q);
        let warning = q.iter().all(|&x| x == 0.0).then_some(Warning::ZeroSolution);
        DensityVector { q, residual, warning }
    }

    pub fn max_abs(&self) -> f64 {
        self.q.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// The same vector scaled by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        DensityVector {
            q: self.q.iter().map(|x| x * k).collect(),
            residual: self.residual * k.abs(),
            warning: self.warning,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mpi,
    Rref,
    Lp,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mpi" => Ok(Method::Mpi),
            "rref" => Ok(Method::Rref),
            "lp" => Ok(Method::Lp),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

/// User vectors for the three methods. Missing vectors default to all ones
/// of the required length.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    pub xi: Option<Vec<f64>>,
    pub zeta: Option<Vec<f64>>,
    pub lambda: Option<Vec<f64>>,
}

/// Runs `method` with the matching vector from `params`.
pub fn solve(sys: &EquilibriumSystem, method: Method, params: &SolverParams) -> Result<DensityVector> {
    let ones = |n: usize| vec![1.0; n];
    let cols = sys.analysis().cols;
    match method {
        Method::Mpi => solve_mpi(sys, params.xi.as_deref().unwrap_or(&ones(cols))),
        Method::Rref => solve_rref(sys, params.zeta.as_deref().unwrap_or(&ones(sys.analysis().dof))),
        Method::Lp => solve_lp(sys, params.lambda.as_deref().unwrap_or(&ones(cols))),
    }
}

fn require_dof(sys: &EquilibriumSystem) -> Result<()> {
    if sys.analysis().dof == 0 {
        Err(Error::ZeroDof)
    } else {
        Ok(())
    }
}

fn require_len(what: &'static str, expected: usize, v: &[f64]) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            what,
            expected,
            got: v.len(),
        });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("{what} has a non-finite entry")));
    }
    Ok(())
}
