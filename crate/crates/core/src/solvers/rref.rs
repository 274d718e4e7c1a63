use nalgebra::DMatrix;

use super::{require_dof, require_len, DensityVector};
use crate::equilibrium::EquilibriumSystem;
use crate::error::Result;

/// Reduced row echelon form. Only the first `pivots.len()` rows of `matrix`
/// are nonzero; row `i` has a leading one in column `pivots[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref {
    pub matrix: DMatrix<f64>,
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan elimination with partial pivoting. A column whose largest
/// remaining entry is at most `pivot_tol` times the largest entry of that
/// column in the input is skipped; ties go to the first row.
pub fn rref(a: &DMatrix<f64>, pivot_tol: f64) -> Rref {
    let mut m = a.clone();
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let scale = a.column(c).amax();
        let (best, value) = (r..rows)
            .map(|i| (i, m[(i, c)].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if scale == 0.0 || value <= pivot_tol * scale {
            for i in r..rows {
                m[(i, c)] = 0.0;
            }
            continue;
        }
        m.swap_rows(r, best);
        let p = m[(r, c)];
        for j in c..cols {
            m[(r, j)] /= p;
        }
        m[(r, c)] = 1.0;
        for i in 0..rows {
            if i != r {
                let k = m[(i, c)];
                if k != 0.0 {
                    for j in c..cols {
                        m[(i, j)] -= k * m[(r, j)];
                    }
                    m[(i, c)] = 0.0;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: m, pivots }
}

/// Sets the independent entries of `q` to `ζ` and solves for the rest:
/// with `A_rref = (I | B)` after moving pivot columns first,
/// `q_pivot = -B ζ`.
pub fn solve_rref(sys: &EquilibriumSystem, zeta: &[f64]) -> Result<DensityVector> {
    require_dof(sys)?;
    let free = &sys.analysis().independent_columns;
    require_len("zeta", free.len(), zeta)?;
    let Rref { matrix, pivots } = sys.rref();
    let mut q = vec![0.0; sys.analysis().cols];
    for (&c, &z) in free.iter().zip(zeta) {
        q[c] = z;
    }
    for (i, &p) in pivots.iter().enumerate() {
        q[p] = -free.iter().zip(zeta).map(|(&c, &z)| matrix[(i, c)] * z).sum::<f64>();
    }
    Ok(DensityVector::new(sys, q))
}
