//! Canonical Platonic and Archimedean solids, centered at the origin.
//!
//! The tetrahedron uses the coordinates
//!
//! ```text
//! A1 = (0, 0, sqrt(2/3) - 1/(2 sqrt 6))
//! A2 = (-1/(2 sqrt 3), -1/2, -1/(2 sqrt 6))
//! A3 = (-1/(2 sqrt 3),  1/2, -1/(2 sqrt 6))
//! A4 = ( 1/sqrt 3,      0,   -1/(2 sqrt 6))
//! ```
//!
//! with faces listed as (A2 A3 A4), (A3 A2 A1), (A4 A1 A2), (A1 A4 A3).
//! Every other solid has unit edge length and is built from the usual
//! symmetric coordinate sets (phi is the golden ratio):
//!
//! | solid                | coordinates before scaling              | scale        |
//! |----------------------|-----------------------------------------|--------------|
//! | cube                 | (+-1/2, +-1/2, +-1/2)                   | 1            |
//! | octahedron           | (+-1, 0, 0) and permutations            | 1/sqrt 2     |
//! | dodecahedron         | (+-1,+-1,+-1), cyclic (0, +-1/phi, +-phi) | phi/2      |
//! | icosahedron          | cyclic (0, +-1, +-phi)                  | 1/2          |
//! | truncated cube       | all permutations of (+-(sqrt2-1), +-1, +-1) | 1/(2 (sqrt2-1)) |
//! | truncated octahedron | all permutations of (0, +-1, +-2)       | 1/sqrt 2     |
//!
//! Faces of the non-tetrahedral solids are recovered as the supporting planes
//! of the vertex set and emitted counterclockwise as seen from outside.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;

use super::{build_polyhedron, GeometryError, Point3, Polyhedron};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolidName {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
    TruncatedCube,
    TruncatedOctahedron,
}

impl SolidName {
    pub const ALL: [SolidName; 7] = [
        SolidName::Tetrahedron,
        SolidName::Cube,
        SolidName::Octahedron,
        SolidName::Dodecahedron,
        SolidName::Icosahedron,
        SolidName::TruncatedCube,
        SolidName::TruncatedOctahedron,
    ];

    pub const ALL_NAMES: [&'static str; 7] = [
        "tetrahedron",
        "cube",
        "octahedron",
        "dodecahedron",
        "icosahedron",
        "truncated_cube",
        "truncated_octahedron",
    ];

    pub fn as_str(self) -> &'static str {
        Self::ALL_NAMES[self as usize]
    }
}

impl fmt::Display for SolidName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolidName {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        Self::ALL_NAMES
            .iter()
            .position(|&n| n == norm)
            .map(|i| Self::ALL[i])
            .ok_or_else(|| GeometryError::UnknownSolid(s.to_string()))
    }
}

/// Builds one of the canonical solids.
pub fn canonical_solid(name: SolidName) -> Polyhedron {
    let (vertices, cycles) = match name {
        SolidName::Tetrahedron => tetrahedron(),
        other => {
            let vertices = raw_vertices(other);
            let cycles = hull_faces(&vertices);
            (vertices, cycles)
        }
    };
    build_polyhedron(&vertices, &cycles).expect("canonical solids are valid by construction")
}

fn tetrahedron() -> (Vec<Point3>, Vec<Vec<usize>>) {
    let s3 = 3f64.sqrt();
    let s6 = 6f64.sqrt();
    let base = -1.0 / (2.0 * s6);
    let vertices = vec![
        Point3::new(0.0, 0.0, (2.0f64 / 3.0).sqrt() + base),
        Point3::new(-1.0 / (2.0 * s3), -0.5, base),
        Point3::new(-1.0 / (2.0 * s3), 0.5, base),
        Point3::new(1.0 / s3, 0.0, base),
    ];
    let cycles = vec![vec![1, 2, 3], vec![2, 1, 0], vec![3, 0, 1], vec![0, 3, 2]];
    (vertices, cycles)
}

fn raw_vertices(name: SolidName) -> Vec<Point3> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let (points, scale): (Vec<[f64; 3]>, f64) = match name {
        SolidName::Tetrahedron => unreachable!("handled separately"),
        SolidName::Cube => (sign_variants([1.0, 1.0, 1.0]), 0.5),
        SolidName::Octahedron => (cyclic(&sign_variants([1.0, 0.0, 0.0])), 0.5f64.sqrt()),
        SolidName::Dodecahedron => {
            let mut p = sign_variants([1.0, 1.0, 1.0]);
            p.extend(cyclic(&sign_variants([0.0, 1.0 / phi, phi])));
            (p, phi / 2.0)
        }
        SolidName::Icosahedron => (cyclic(&sign_variants([0.0, 1.0, phi])), 0.5),
        SolidName::TruncatedCube => {
            let xi = 2f64.sqrt() - 1.0;
            (
                all_permutations(&sign_variants([xi, 1.0, 1.0])),
                1.0 / (2.0 * xi),
            )
        }
        SolidName::TruncatedOctahedron => (
            all_permutations(&sign_variants([0.0, 1.0, 2.0])),
            0.5f64.sqrt(),
        ),
    };
    points
        .into_iter()
        .map(|[x, y, z]| Point3::new(x * scale, y * scale, z * scale))
        .collect()
}

/// Every sign flip of the nonzero coordinates, without duplicates.
fn sign_variants(p: [f64; 3]) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for mask in 0..8u8 {
        let mut q = p;
        for (k, c) in q.iter_mut().enumerate() {
            if mask & (1 << k) != 0 {
                *c = -*c;
            }
        }
        push_unique(&mut out, q);
    }
    out
}

fn cyclic(points: &[[f64; 3]]) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for shift in 0..3 {
        for p in points {
            push_unique(
                &mut out,
                [p[shift % 3], p[(shift + 1) % 3], p[(shift + 2) % 3]],
            );
        }
    }
    out
}

fn all_permutations(points: &[[f64; 3]]) -> Vec<[f64; 3]> {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [1, 2, 0],
        [2, 0, 1],
        [0, 2, 1],
        [2, 1, 0],
        [1, 0, 2],
    ];
    let mut out = Vec::new();
    for perm in PERMS {
        for p in points {
            push_unique(&mut out, [p[perm[0]], p[perm[1]], p[perm[2]]]);
        }
    }
    out
}

fn push_unique(out: &mut Vec<[f64; 3]>, q: [f64; 3]) {
    // -0.0 == 0.0, so sign flips of zero coordinates collapse here
    if !out.contains(&q) {
        out.push(q);
    }
}

/// Supporting planes of a point set in convex position, each returned as a
/// vertex cycle counterclockwise about its outward normal.
fn hull_faces(vertices: &[Point3]) -> Vec<Vec<usize>> {
    let n = vertices.len();
    let scale = vertices.iter().map(|v| v.coords.norm()).fold(0.0, f64::max);
    let tol = 1e-9 * scale;
    let mut faces: BTreeMap<Vec<usize>, Vector3<f64>> = BTreeMap::new();

    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let normal = (vertices[j] - vertices[i]).cross(&(vertices[k] - vertices[i]));
                if normal.norm() <= tol * scale {
                    continue;
                }
                let mut normal = normal.normalize();
                let offset = normal.dot(&vertices[i].coords);
                let dists: Vec<f64> = vertices
                    .iter()
                    .map(|v| normal.dot(&v.coords) - offset)
                    .collect();
                if dists.iter().all(|&d| d >= -tol) {
                    normal = -normal;
                } else if !dists.iter().all(|&d| d <= tol) {
                    continue;
                }
                let on_plane: Vec<usize> = (0..n).filter(|&v| dists[v].abs() <= tol).collect();
                faces.entry(on_plane).or_insert(normal);
            }
        }
    }

    faces
        .into_iter()
        .map(|(members, normal)| {
            let center = members
                .iter()
                .fold(Vector3::zeros(), |acc, &v| acc + vertices[v].coords)
                / members.len() as f64;
            let u = (vertices[members[0]].coords - center).normalize();
            let w = normal.cross(&u);
            let mut keyed: Vec<(f64, usize)> = members
                .iter()
                .map(|&v| {
                    let d = vertices[v].coords - center;
                    (d.dot(&w).atan2(d.dot(&u)), v)
                })
                .collect();
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
            keyed.into_iter().map(|(_, v)| v).collect()
        })
        .collect()
}
