use microlp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::DVector;

use super::{require_dof, require_len, DensityVector};
use crate::equilibrium::EquilibriumSystem;
use crate::error::{Error, Result};

/// Minimises `λ · q` subject to `A q = 0` and `q ≥ 1`.
///
/// The equality constraints are eliminated by writing `q = N t` with `N` an
/// orthonormal nullspace basis, which leaves `dof` free variables and one
/// inequality per face.
pub fn solve_lp(sys: &EquilibriumSystem, lambda: &[f64]) -> Result<DensityVector> {
    require_dof(sys)?;
    require_len("lambda", sys.analysis().cols, lambda)?;
    if lambda.iter().any(|&l| l <= 0.0) {
        return Err(Error::InvalidParameter("lambda must be strictly positive".into()));
    }

    let n = sys.nullspace();
    let cost = n.transpose() * DVector::from_column_slice(lambda);
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let t: Vec<_> = cost
        .iter()
        .map(|&c| problem.add_var(c, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    for row in n.row_iter() {
        let expr: Vec<_> = t.iter().zip(row.iter()).map(|(&v, &c)| (v, c)).collect();
        problem.add_constraint(expr, ComparisonOp::Ge, 1.0);
    }

    let solution = match problem.solve() {
        Ok(outcome) => outcome
            .into_solution()
            .map_err(|_| Error::Solver("interrupted".into()))?,
        Err(microlp::Error::Infeasible) => return Err(Error::Infeasible),
        Err(e) => return Err(Error::Solver(e.to_string())),
    };
    let t = DVector::from_iterator(t.len(), t.iter().map(|&v| solution.var_value(v)));
    let mut q: Vec<f64> = (n * t).iter().copied().collect();

    // The simplex honours the bounds only up to its own feasibility
    // tolerance; a uniform rescale restores q ≥ 1 without leaving the
    // nullspace.
    let low = q.iter().copied().fold(f64::INFINITY, f64::min);
    if low <= 0.0 {
        return Err(Error::Infeasible);
    }
    if low < 1.0 {
        q.iter_mut().for_each(|x| *x /= low);
    }
    Ok(DensityVector::new(sys, q))
}
