//! Test-only fixtures and reference implementations. Nothing here calls the
//! library's numerics: the oracles work on plain `Vec<Vec<f64>>`.

#![allow(dead_code)]

use polyrecip::complex::fixtures::{box_grid_with, simplex, stellar_subdivide};
use polyrecip::{CellComplex, Point3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<f64>>;

pub fn dense(m: &nalgebra::DMatrix<f64>) -> Dense {
    (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
}

// ---------------------------------------------------------------- fixtures

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random, well-shaped tetrahedron.
pub fn random_corners(rng: &mut ChaCha8Rng) -> [Point3; 4] {
    let jitter = |rng: &mut ChaCha8Rng| rng.random_range(-0.3..0.3);
    [
        Point3::new(jitter(rng), jitter(rng), jitter(rng)),
        Point3::new(3.0 + jitter(rng), jitter(rng), jitter(rng)),
        Point3::new(jitter(rng), 3.0 + jitter(rng), jitter(rng)),
        Point3::new(jitter(rng), jitter(rng), 3.0 + jitter(rng)),
    ]
}

/// A tetrahedron split `splits` times by stellar subdivision at random
/// interior points; each split adds one degree of indeterminacy.
pub fn subdivided_tetra(seed: u64, splits: usize) -> CellComplex {
    let mut rng = rng(seed);
    let mut c = simplex(random_corners(&mut rng));
    let mut target = 0;
    for _ in 0..splits {
        let corners = cell_vertices(&c, target);
        let mut w: Vec<f64> = (0..4).map(|_| rng.random_range(0.5..1.5)).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        let p = corners
            .iter()
            .zip(&w)
            .fold(nalgebra::Vector3::zeros(), |acc, (&v, &wi)| acc + c.vertices()[v].coords * wi);
        c = stellar_subdivide(&c, target, Point3::from(p)).unwrap();
        target = c.cells().len() - 1;
    }
    c
}

pub fn cell_vertices(c: &CellComplex, cell: usize) -> Vec<usize> {
    let mut v: Vec<usize> = c.cells()[cell]
        .faces()
        .iter()
        .flat_map(|&f| c.faces()[f].vertices().to_vec())
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// A box grid with random plane spacings.
pub fn random_grid(seed: u64, dims: [usize; 3]) -> CellComplex {
    let mut rng = rng(seed);
    let mut ticks = |n: usize| {
        let mut t = vec![0.0];
        for _ in 0..n {
            let last = *t.last().unwrap();
            t.push(last + rng.random_range(0.5..2.0));
        }
        t
    };
    let (xs, ys, zs) = (ticks(dims[0]), ticks(dims[1]), ticks(dims[2]));
    box_grid_with(&xs, &ys, &zs)
}

/// The generated suite: subdivided tetrahedra and box grids, all with the
/// exterior as stress cell.
pub fn generated_suite() -> Vec<(String, CellComplex)> {
    let mut out = Vec::new();
    for seed in 0..10u64 {
        let splits = 1 + (seed as usize % 4);
        out.push((format!("subdivided tetra #{seed} ({splits} splits)"), subdivided_tetra(seed, splits)));
    }
    let grids = [[2, 2, 1], [2, 1, 2], [1, 2, 2], [2, 2, 1], [3, 2, 1], [2, 3, 1], [2, 2, 2], [3, 3, 1], [2, 2, 1], [3, 2, 2]];
    for (i, dims) in grids.iter().enumerate() {
        out.push((format!("box grid {dims:?} #{i}"), random_grid(100 + i as u64, *dims)));
    }
    out
}

// ------------------------------------------------------------------ oracles

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn mat_vec(a: &Dense, x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

/// One-sided Jacobi SVD. Returns the singular values (unsorted) and the
/// right singular vectors as columns of `v`, in matching order.
pub fn jacobi_svd(a: &Dense) -> (Vec<f64>, Dense) {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut u: Dense = a.clone();
    let mut v: Dense = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for row in u.iter().take(m) {
                    alpha += row[p] * row[p];
                    beta += row[q] * row[q];
                    gamma += row[p] * row[q];
                }
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for row in u.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
                for row in v.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = (0..n).map(|j| u.iter().map(|r| r[j] * r[j]).sum::<f64>().sqrt()).collect();
    (sigma, v)
}

/// Rank and an orthonormal nullspace basis (as column vectors) at a
/// relative singular-value cutoff.
pub fn svd_nullspace(a: &Dense, rel_tol: f64) -> (usize, Vec<Vec<f64>>) {
    let (sigma, v) = jacobi_svd(a);
    let top = sigma.iter().cloned().fold(0.0, f64::max);
    let mut basis = Vec::new();
    let mut rank = 0;
    for (j, &s) in sigma.iter().enumerate() {
        if s > rel_tol * top {
            rank += 1;
        } else {
            basis.push(v.iter().map(|row| row[j]).collect());
        }
    }
    (rank, basis)
}

/// Norm of the part of `q` outside the span of an orthonormal basis.
pub fn off_span(q: &[f64], basis: &[Vec<f64>]) -> f64 {
    let mut r = q.to_vec();
    for b in basis {
        let k: f64 = b.iter().zip(q).map(|(x, y)| x * y).sum();
        r.iter_mut().zip(b).for_each(|(ri, bi)| *ri -= k * bi);
    }
    r.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn solve_square(mut a: Dense, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-12 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c {
                let k = a[r][c] / a[c][c];
                for j in c..n {
                    a[r][j] -= k * a[c][j];
                }
                b[r] -= k * b[c];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn choose(n: usize, k: usize, start: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if acc.len() == k {
        out.push(acc.clone());
        return;
    }
    for i in start..n {
        acc.push(i);
        choose(n, k, i + 1, acc, out);
        acc.pop();
    }
}

/// Brute-force LP over the nullspace: minimise `λ·q` over `q = N t`,
/// `q ≥ 1`, by visiting every vertex of the feasible polyhedron. Returns
/// `None` when no vertex is feasible.
pub fn lp_by_vertices(basis: &[Vec<f64>], lambda: &[f64]) -> Option<(f64, Vec<f64>)> {
    let k = basis.len();
    let f = lambda.len();
    let n_row = |i: usize| -> Vec<f64> { basis.iter().map(|b| b[i]).collect() };
    let mut subsets = Vec::new();
    choose(f, k, 0, &mut Vec::new(), &mut subsets);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for s in subsets {
        let a: Dense = s.iter().map(|&i| n_row(i)).collect();
        let Some(t) = solve_square(a, vec![1.0; k]) else { continue };
        let q: Vec<f64> = (0..f).map(|i| n_row(i).iter().zip(&t).map(|(x, y)| x * y).sum()).collect();
        if q.iter().all(|&x| x >= 1.0 - 1e-9) {
            let cost: f64 = q.iter().zip(lambda).map(|(x, l)| x * l).sum();
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, q));
            }
        }
    }
    best
}

/// Whether some vector of the 1-dimensional span of `n` has every entry at
/// least one.
pub fn one_dim_positive(n: &[f64]) -> bool {
    n.iter().all(|&x| x > 0.0) || n.iter().all(|&x| x < 0.0)
}
