//! Marching cubes over a [`ScalarGrid`].
//!
//! The 256-entry case table is generated once from a per-face rule instead of
//! being transcribed. On every cube face, the zero set is drawn as segments
//! that cut off each run of positive corners separately. Both cells sharing a
//! face apply the same rule to the same four values, so neighbouring cells
//! always agree on the crossing segments and the output is watertight. The
//! segments of a cell close into loops, which are fan-triangulated.
//!
//! Corner `c` of a cell sits at offset `(c & 1, (c >> 1) & 1, (c >> 2) & 1)`.
//! Edge `e` runs along axis `e / 4` starting at corner [`EDGES`]`[e].0`.
//! Triangles are wound so their right-hand normal points toward decreasing
//! values, i.e. out of the positive region.

use std::sync::OnceLock;

use nalgebra::Vector3;
use rayon::prelude::*;

use super::{IsoError, ScalarGrid};
use crate::geometry::Point3;
use crate::mesh::TriangleMesh;

/// Corner pairs of the 12 cell edges, grouped by axis.
pub const EDGES: [(u8, u8); 12] = [
    (0, 1),
    (2, 3),
    (4, 5),
    (6, 7),
    (0, 2),
    (1, 3),
    (4, 6),
    (5, 7),
    (0, 4),
    (1, 5),
    (2, 6),
    (3, 7),
];

/// Crossing positions are kept this far (in edge-length units) from the edge
/// endpoints so that no two vertices of a cell coincide.
const T_MARGIN: f64 = 1e-6;

fn edge_between(a: u8, b: u8) -> u8 {
    EDGES
        .iter()
        .position(|&(p, q)| (p, q) == (a, b) || (p, q) == (b, a))
        .expect("corners share an edge") as u8
}

/// The six faces, each as four corners counterclockwise about the outward normal.
fn cell_faces() -> [[u8; 4]; 6] {
    let mut faces = [[0u8; 4]; 6];
    for axis in 0..3 {
        let (u, v) = ((axis + 1) % 3, (axis + 2) % 3);
        for side in 0..2u8 {
            let corner = |du: u8, dv: u8| (side << axis) | (du << u) | (dv << v);
            let mut q = [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)];
            if side == 0 {
                q.reverse();
            }
            faces[axis * 2 + side as usize] = q;
        }
    }
    faces
}

/// Surface loops of one configuration; `mask` bit `c` is set when corner `c` is positive.
pub fn case_loops(mask: u8) -> Vec<Vec<u8>> {
    let positive = |c: u8| mask >> c & 1 == 1;
    // next[entry edge] = exit edge, following the surface boundary
    let mut next: [Option<u8>; 12] = [None; 12];
    for q in cell_faces() {
        for j in 0..4 {
            if !(positive(q[j]) && !positive(q[(j + 1) % 4])) {
                continue;
            }
            let exit = edge_between(q[j], q[(j + 1) % 4]);
            let mut k = j;
            while positive(q[(k + 3) % 4]) {
                k = (k + 3) % 4;
            }
            let entry = edge_between(q[(k + 3) % 4], q[k]);
            debug_assert!(next[entry as usize].is_none());
            next[entry as usize] = Some(exit);
        }
    }

    let mut loops = Vec::new();
    let mut used = [false; 12];
    for start in 0..12u8 {
        if used[start as usize] || next[start as usize].is_none() {
            continue;
        }
        let mut cycle = Vec::new();
        let mut e = start;
        while !used[e as usize] {
            used[e as usize] = true;
            cycle.push(e);
            e = next[e as usize].expect("surface loops are closed");
        }
        loops.push(cycle);
    }
    loops
}

/// Triangles (as edge triples) for every configuration.
pub fn case_table() -> &'static [Vec<[u8; 3]>; 256] {
    static TABLE: OnceLock<[Vec<[u8; 3]>; 256]> = OnceLock::new();
    TABLE.get_or_init(|| {
        std::array::from_fn(|mask| {
            case_loops(mask as u8)
                .iter()
                .flat_map(|l| (1..l.len() - 1).map(move |i| [l[0], l[i], l[i + 1]]))
                .collect()
        })
    })
}

/// Extracts the zero level set of `grid` as a triangle mesh.
///
/// Every sample on the outer shell of the grid must be negative so the surface
/// closes inside the box.
pub fn marching_cubes(grid: &ScalarGrid) -> Result<TriangleMesh, IsoError> {
    let [nx, ny, nz] = grid.spec.res;
    let values = &grid.values;
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(IsoError::NonFinite(i));
    }
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let on_shell =
                    i == 0 || j == 0 || k == 0 || i == nx - 1 || j == ny - 1 || k == nz - 1;
                if on_shell && values[grid.spec.index(i, j, k)] > 0.0 {
                    return Err(IsoError::SurfaceTouchesBoundary);
                }
            }
        }
    }

    let strides = [1usize, nx, nx * ny];
    let positive = |n: usize| values[n] > 0.0;

    // Crossing edges, id = node * 3 + axis, ascending.
    let crossings: Vec<u64> = (0..nz)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut out = Vec::new();
            for j in 0..ny {
                for i in 0..nx {
                    let n = grid.spec.index(i, j, k);
                    let ijk = [i, j, k];
                    for axis in 0..3 {
                        if ijk[axis] + 1 < grid.spec.res[axis]
                            && positive(n) != positive(n + strides[axis])
                        {
                            out.push(n as u64 * 3 + axis as u64);
                        }
                    }
                }
            }
            out
        })
        .collect();
    if crossings.is_empty() {
        return Err(IsoError::EmptySurface);
    }

    let gradients = |n: usize| grid.gradient_at(n);
    let (vertices, normals): (Vec<Point3>, Vec<Vector3<f64>>) = crossings
        .par_iter()
        .map(|&id| {
            let n0 = (id / 3) as usize;
            let axis = (id % 3) as usize;
            let n1 = n0 + strides[axis];
            let (v0, v1) = (values[n0], values[n1]);
            let t = (v0 / (v0 - v1)).clamp(T_MARGIN, 1.0 - T_MARGIN);
            let p0 = grid.spec.node_at(n0);
            let p1 = grid.spec.node_at(n1);
            let pos = p0 + (p1 - p0) * t;
            let g = gradients(n0) * (1.0 - t) + gradients(n1) * t;
            (pos, -g.try_normalize(0.0).unwrap_or_else(Vector3::zeros))
        })
        .unzip();

    let table = case_table();
    let lookup = |id: u64| {
        crossings
            .binary_search(&id)
            .expect("cell edge with a sign change is a crossing")
    };
    let triangles: Vec<[usize; 3]> = (0..nz - 1)
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut out = Vec::new();
            for j in 0..ny - 1 {
                for i in 0..nx - 1 {
                    let base = grid.spec.index(i, j, k);
                    let corner_node = |c: u8| {
                        base + (c as usize & 1) * strides[0]
                            + (c as usize >> 1 & 1) * strides[1]
                            + (c as usize >> 2 & 1) * strides[2]
                    };
                    let mask = (0..8u8).fold(0u8, |m, c| {
                        if positive(corner_node(c)) {
                            m | 1 << c
                        } else {
                            m
                        }
                    });
                    for tri in &table[mask as usize] {
                        out.push(tri.map(|e| {
                            let (c0, _) = EDGES[e as usize];
                            let axis = e as u64 / 4;
                            lookup(corner_node(c0) as u64 * 3 + axis)
                        }));
                    }
                }
            }
            out
        })
        .collect();

    let mut mesh = TriangleMesh {
        vertices,
        triangles,
        normals,
    };
    fill_missing_normals(&mut mesh);
    Ok(mesh)
}

/// Vertices whose sampled gradient vanished take the area-weighted normal of
/// their triangles instead.
fn fill_missing_normals(mesh: &mut TriangleMesh) {
    if mesh.normals.iter().all(|n| n.norm_squared() > 0.0) {
        return;
    }
    let mut acc = vec![Vector3::zeros(); mesh.vertices.len()];
    for &[a, b, c] in &mesh.triangles {
        let n = (mesh.vertices[b] - mesh.vertices[a]).cross(&(mesh.vertices[c] - mesh.vertices[a]));
        for v in [a, b, c] {
            acc[v] += n;
        }
    }
    for (n, a) in mesh.normals.iter_mut().zip(acc) {
        if n.norm_squared() == 0.0 {
            *n = a.try_normalize(0.0).unwrap_or_else(Vector3::z);
        }
    }
}
