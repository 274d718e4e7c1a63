//! Thin bridge to faer's SVD. nalgebra stays the matrix type everywhere else;
//! its own SVD loses accuracy on the sparse, rank-deficient matrices that
//! equilibrium systems produce.

use nalgebra::DMatrix;

/// Full singular value decomposition `A = U Σ Vᵀ`.
pub(crate) struct Svd {
    /// `m × min(m, n)` left vectors.
    pub u: DMatrix<f64>,
    /// Singular values, non-increasing, `min(m, n)` of them.
    pub s: Vec<f64>,
    /// `n × n` right vectors; the trailing columns span the nullspace.
    pub v: DMatrix<f64>,
}

pub(crate) fn svd(a: &DMatrix<f64>) -> Svd {
    let (m, n) = a.shape();
    let k = m.min(n);
    if k == 0 {
        return Svd { u: DMatrix::zeros(m, 0), s: Vec::new(), v: DMatrix::identity(n, n) };
    }
    let mat = faer::Mat::<f64>::from_fn(m, n, |i, j| a[(i, j)]);
    let d = mat.svd().expect("SVD of a finite matrix converges");
    let (u, s, v) = (d.U(), d.S(), d.V());
    Svd {
        u: DMatrix::from_fn(m, k, |i, j| u[(i, j)]),
        s: (0..k).map(|i| s[i]).collect(),
        v: DMatrix::from_fn(n, n, |i, j| v[(i, j)]),
    }
}
