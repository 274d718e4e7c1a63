use nalgebra::{DMatrix, DVector};

use super::{require_dof, require_len, DensityVector};
use crate::equilibrium::EquilibriumSystem;
use crate::error::Result;

/// Moore–Penrose inverse by SVD. Singular values at or below `rel_tol` times
/// the largest one are treated as zero.
pub fn pseudoinverse(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    if a.is_empty() {
        return DMatrix::zeros(a.ncols(), a.nrows());
    }
    let svd = crate::linalg::svd(a);
    let cutoff = rel_tol * svd.s.first().copied().unwrap_or(0.0);
    let mut out = DMatrix::zeros(a.ncols(), a.nrows());
    for (l, &s) in svd.s.iter().enumerate().take_while(|(_, &s)| s > cutoff) {
        out += svd.v.column(l) * svd.u.column(l).transpose() / s;
    }
    out
}

/// `q = (I - A⁺A) ξ`: the nullspace component of the seed `ξ`.
pub fn solve_mpi(sys: &EquilibriumSystem, xi: &[f64]) -> Result<DensityVector> {
    require_dof(sys)?;
    require_len("xi", sys.analysis().cols, xi)?;
    let xi = DVector::from_column_slice(xi);
    let q = &xi - sys.pseudoinverse() * (sys.matrix() * &xi);
    Ok(DensityVector::new(sys, q.iter().copied().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::{box_grid, tetra_fixture};
    use crate::error::Error;

    #[test]
    fn identity_and_zero() {
        let i = DMatrix::<f64>::identity(4, 4);
        assert_eq!(pseudoinverse(&i, 1e-10), i);
        let z = DMatrix::<f64>::zeros(3, 5);
        assert_eq!(pseudoinverse(&z, 1e-10), DMatrix::zeros(5, 3));
    }

    #[test]
    fn penrose_conditions_on_a() {
        let sys = EquilibriumSystem::new(&tetra_fixture()).unwrap();
        let a = sys.matrix();
        let m = sys.pseudoinverse();
        assert!((a * m * a - a).amax() <= 1e-9 * a.amax());
        assert!((m * a * m - m).amax() <= 1e-9 * m.amax());
        assert!(((a * m).transpose() - a * m).amax() < 1e-12);
    }

    #[test]
    fn uniform_seed_gives_uniform_q_on_the_regular_tetra() {
        let sys = EquilibriumSystem::new(&tetra_fixture()).unwrap();
        let q = solve_mpi(&sys, &[1.0; 6]).unwrap();
        for x in &q.q {
            assert!((x - q.q[0]).abs() < 1e-12);
        }
        assert!(q.q[0] > 0.5);
    }

    #[test]
    fn row_space_seed_collapses_to_zero() {
        let sys = EquilibriumSystem::new(&tetra_fixture()).unwrap();
        let row: Vec<f64> = sys.matrix().row(0).iter().copied().collect();
        let q = solve_mpi(&sys, &row).unwrap();
        assert!(q.max_abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let sys = EquilibriumSystem::new(&box_grid([2, 2, 1])).unwrap();
        assert!(matches!(solve_mpi(&sys, &[1.0; 3]), Err(Error::DimensionMismatch { expected: 4, got: 3, .. })));
        assert!(matches!(solve_mpi(&sys, &[1.0, f64::NAN, 1.0, 1.0]), Err(Error::InvalidParameter(_))));
        let boxed = crate::complex::fixtures::glued_boxes()
            .with_stress(crate::Role::Form, 1, crate::Direction::Inward)
            .unwrap();
        let sys = EquilibriumSystem::new(&boxed).unwrap();
        assert_eq!(solve_mpi(&sys, &[1.0; 5]).unwrap_err(), Error::ZeroDof);
    }
}
