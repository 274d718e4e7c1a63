//! Ready-made complexes used by the tests, the examples and the book.

use std::collections::HashMap;

use super::{CellComplex, Direction, Point3, Role};
use crate::error::{Error, Result};

/// A regular tetrahedron split into four cells by its centroid.
///
/// Vertex 0 is the centroid, vertex 1 the apex and vertices 2-4 the base
/// corners, which lie on the unit circle in the `z = 0` plane. Faces 0-5 are
/// the internal faces (each through the centroid) and faces 6-9 are the hull.
/// Cells 0-3 are the internal cells; cell 4 is the exterior and is the
/// self-stress cell of a form diagram with inward direction.
pub fn tetra_fixture() -> CellComplex {
    let h = 3f64.sqrt() / 2.0;
    let apex = Point3::new(0.0, 0.0, 2f64.sqrt());
    let base = [Point3::new(1.0, 0.0, 0.0), Point3::new(-0.5, h, 0.0), Point3::new(-0.5, -h, 0.0)];
    let centroid = Point3::new(0.0, 0.0, apex.z / 4.0);

    CellComplex::new(
        vec![centroid, apex, base[0], base[1], base[2]],
        vec![
            vec![0, 3, 1],
            vec![0, 1, 2],
            vec![0, 2, 4],
            vec![0, 3, 4],
            vec![0, 3, 2],
            vec![0, 1, 4],
            vec![1, 2, 3],
            vec![1, 3, 4],
            vec![1, 2, 4],
            vec![2, 3, 4],
        ],
        vec![
            vec![0, 1, 4, 6],
            vec![0, 3, 5, 7],
            vec![1, 2, 5, 8],
            vec![2, 3, 4, 9],
            vec![6, 7, 8, 9],
        ],
        Role::Form,
        4,
        Direction::Inward,
    )
    .expect("tetra fixture is well formed")
}

/// A single tetrahedron and its exterior: two cells sharing all four faces.
pub fn simplex(corners: [Point3; 4]) -> CellComplex {
    CellComplex::new(
        corners.to_vec(),
        vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        vec![vec![0, 1, 2, 3], vec![0, 1, 2, 3]],
        Role::Form,
        1,
        Direction::Inward,
    )
    .expect("simplex is well formed")
}

/// A unit cube cut in two by the `x = 1` mid-plane (the cube spans `[0,2]` in
/// x): two boxes plus the exterior cell, which is the stress cell.
pub fn glued_boxes() -> CellComplex {
    box_grid([2, 1, 1])
}

/// An `nx × ny × nz` grid of unit boxes; see [`box_grid_with`].
pub fn box_grid(dims: [usize; 3]) -> CellComplex {
    let ticks = |n: usize| (0..=n).map(|i| i as f64).collect::<Vec<_>>();
    box_grid_with(&ticks(dims[0]), &ticks(dims[1]), &ticks(dims[2]))
}

/// A rectilinear grid of boxes with the given (strictly increasing) plane
/// coordinates along each axis. Interior cells are numbered x-major; the
/// exterior cell comes last and is the stress cell of a form diagram with
/// inward direction.
pub fn box_grid_with(xs: &[f64], ys: &[f64], zs: &[f64]) -> CellComplex {
    let (nx, ny, nz) = (xs.len() - 1, ys.len() - 1, zs.len() - 1);
    assert!(nx > 0 && ny > 0 && nz > 0, "grid needs at least one box");
    let vid = |i: usize, j: usize, k: usize| (i * (ny + 1) + j) * (nz + 1) + k;

    let mut vertices = Vec::new();
    for &x in xs {
        for &y in ys {
            for &z in zs {
                vertices.push(Point3::new(x, y, z));
            }
        }
    }

    let mut faces = Vec::new();
    let mut face_id = HashMap::new();
    let mut add = |key: (u8, usize, usize, usize), lp: Vec<usize>| {
        face_id.insert(key, faces.len());
        faces.push(lp);
    };
    for i in 0..=nx {
        for j in 0..ny {
            for k in 0..nz {
                add((0, i, j, k), vec![vid(i, j, k), vid(i, j + 1, k), vid(i, j + 1, k + 1), vid(i, j, k + 1)]);
            }
        }
    }
    for i in 0..nx {
        for j in 0..=ny {
            for k in 0..nz {
                add((1, i, j, k), vec![vid(i, j, k), vid(i + 1, j, k), vid(i + 1, j, k + 1), vid(i, j, k + 1)]);
            }
        }
    }
    for i in 0..nx {
        for j in 0..ny {
            for k in 0..=nz {
                add((2, i, j, k), vec![vid(i, j, k), vid(i + 1, j, k), vid(i + 1, j + 1, k), vid(i, j + 1, k)]);
            }
        }
    }

    let mut cells = Vec::new();
    let mut uses = vec![0usize; faces.len()];
    for i in 0..nx {
        for j in 0..ny {
            for k in 0..nz {
                let cell = vec![
                    face_id[&(0, i, j, k)],
                    face_id[&(0, i + 1, j, k)],
                    face_id[&(1, i, j, k)],
                    face_id[&(1, i, j + 1, k)],
                    face_id[&(2, i, j, k)],
                    face_id[&(2, i, j, k + 1)],
                ];
                for &f in &cell {
                    uses[f] += 1;
                }
                cells.push(cell);
            }
        }
    }
    cells.push((0..faces.len()).filter(|&f| uses[f] == 1).collect());
    let exterior = cells.len() - 1;

    CellComplex::new(vertices, faces, cells, Role::Form, exterior, Direction::Inward)
        .expect("box grid is well formed")
}

/// Splits tetrahedral cell `cell` into four by a new vertex at `point`.
///
/// The first new cell keeps the id `cell`; the other three are appended.
/// The new vertex and six new faces are appended too, so every existing id
/// stays valid.
pub fn stellar_subdivide(complex: &CellComplex, cell: usize, point: Point3) -> Result<CellComplex> {
    let faces = complex
        .cells()
        .get(cell)
        .ok_or_else(|| Error::InvalidParameter(format!("no cell {cell}")))?
        .faces()
        .to_vec();
    let mut corners: Vec<usize> = faces
        .iter()
        .flat_map(|&f| complex.faces()[f].vertices().iter().copied())
        .collect();
    corners.sort_unstable();
    corners.dedup();
    if faces.len() != 4 || corners.len() != 4 {
        return Err(Error::InvalidParameter(format!("cell {cell} is not a tetrahedron")));
    }
    if cell == complex.stress_cell() {
        return Err(Error::InvalidParameter("cannot subdivide the stress cell".into()));
    }

    let mut vertices = complex.vertices().to_vec();
    let apex = vertices.len();
    vertices.push(point);
    let mut loops: Vec<Vec<usize>> = complex.faces().iter().map(|f| f.vertices().to_vec()).collect();
    let mut spoke = HashMap::new();
    for (i, &a) in corners.iter().enumerate() {
        for &b in &corners[i + 1..] {
            spoke.insert((a, b), loops.len());
            loops.push(vec![apex, a, b]);
        }
    }

    let mut cells: Vec<Vec<usize>> = complex.cells().iter().map(|c| c.faces().to_vec()).collect();
    let mut pieces = faces.iter().map(|&f| {
        let mut v = complex.faces()[f].vertices().to_vec();
        v.sort_unstable();
        vec![f, spoke[&(v[0], v[1])], spoke[&(v[1], v[2])], spoke[&(v[0], v[2])]]
    });
    cells[cell] = pieces.next().expect("four faces");
    cells.extend(pieces);

    CellComplex::new(
        vertices,
        loops,
        cells,
        complex.role(),
        complex.stress_cell(),
        complex.direction(),
    )
}
