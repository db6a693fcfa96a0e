//! Convex polyhedra held in both the face/vertex form and the halfspace form.
//!
//! A [`Polyhedron`] is built from a vertex list and a list of face cycles.
//! Construction fits a plane per face, normalizes every face to point away
//! from the vertex centroid, and derives the inequality system `A x <= b`
//! with unit-length rows. Face `i` and halfspace row `i` always describe the
//! same plane.

mod solids;

use std::collections::HashMap;

use nalgebra::{Point3 as NPoint3, Vector3};
use thiserror::Error;

pub use solids::{canonical_solid, SolidName};

/// A point in model space.
pub type Point3 = NPoint3<f64>;

/// Relative planarity tolerance; multiplied by the circumradius.
pub const PLANE_TOLERANCE: f64 = 1e-9;
/// Relative tolerance for distances to edge lines; multiplied by the circumradius.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("face {face} is not planar: vertex {vertex} is {deviation:e} off the fitted plane")]
    NonPlanarFace {
        face: usize,
        vertex: usize,
        deviation: f64,
    },
    #[error("surface is not closed: {0}")]
    NotClosed(String),
    #[error("polyhedron is not convex: vertex {vertex} lies {excess:e} outside the plane of face {face}")]
    NotConvex {
        face: usize,
        vertex: usize,
        excess: f64,
    },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("face {face} has an invalid cycle: {reason}")]
    InvalidCycle { face: usize, reason: String },
    #[error("unknown solid `{0}` (expected one of: {names})", names = SolidName::ALL_NAMES.join(", "))]
    UnknownSolid(String),
}

/// One face: an ordered vertex cycle together with its supporting plane.
///
/// The cycle is stored counterclockwise as seen from outside, so the right-hand
/// normal of the cycle equals `normal`.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub cycle: Vec<usize>,
    pub normal: Vector3<f64>,
    pub offset: f64,
}

impl Face {
    /// Signed distance of `x` from the face plane; positive on the outer side.
    #[inline]
    pub fn signed_distance(&self, x: &Point3) -> f64 {
        self.normal.dot(&x.coords) - self.offset
    }
}

/// One row `normal . x <= offset` of the inequality system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halfspace {
    pub normal: Vector3<f64>,
    pub offset: f64,
}

/// The inequality system `A x <= b`, one unit-normal row per face.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfspaceSystem {
    pub rows: Vec<Halfspace>,
}

impl HalfspaceSystem {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Largest value of `normal . x - offset` over all rows.
    pub fn max_violation(&self, x: &Point3) -> f64 {
        self.rows
            .iter()
            .map(|h| h.normal.dot(&x.coords) - h.offset)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Where a point sits relative to a polyhedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

impl std::fmt::Display for Containment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Containment::Inside => "inside",
            Containment::Boundary => "boundary",
            Containment::Outside => "outside",
        })
    }
}

/// A validated closed convex polyhedron. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron {
    vertices: Vec<Point3>,
    faces: Vec<Face>,
    halfspaces: HalfspaceSystem,
    edges: Vec<[usize; 2]>,
    centroid: Point3,
    circumradius: f64,
}

impl Polyhedron {
    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn halfspaces(&self) -> &HalfspaceSystem {
        &self.halfspaces
    }

    /// Undirected edges, each listed once with the smaller index first.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// Vertex centroid.
    pub fn centroid(&self) -> Point3 {
        self.centroid
    }

    /// Largest distance from the centroid to a vertex.
    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    /// Absolute planarity / containment tolerance for this solid.
    pub fn eps_plane(&self) -> f64 {
        PLANE_TOLERANCE * self.circumradius
    }

    /// Absolute tolerance below which a query is treated as lying on an edge line.
    pub fn eps_sing(&self) -> f64 {
        SINGULAR_TOLERANCE * self.circumradius
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.faces.iter().map(|f| f.cycle.clone()).collect()
    }

    /// Vertex positions of face `i` in cycle order.
    pub fn face_vertices(&self, i: usize) -> impl Iterator<Item = &Point3> + '_ {
        self.faces[i].cycle.iter().map(move |&v| &self.vertices[v])
    }

    /// Classifies `x` against the halfspace system.
    pub fn contains_point(&self, x: &Point3) -> Containment {
        let eps = self.eps_plane();
        let worst = self.halfspaces.max_violation(x);
        if worst < -eps {
            Containment::Inside
        } else if worst <= eps {
            Containment::Boundary
        } else {
            Containment::Outside
        }
    }

    /// Centroid and circumradius.
    pub fn circumsphere(&self) -> (Point3, f64) {
        (self.centroid, self.circumradius)
    }

    /// Returns a copy moved by an arbitrary isometry. Used for equivariance checks.
    pub fn transformed(&self, iso: &nalgebra::Isometry3<f64>) -> Result<Polyhedron, GeometryError> {
        let vertices: Vec<Point3> = self.vertices.iter().map(|v| iso * v).collect();
        build_polyhedron(&vertices, &self.cycles())
    }
}

/// Builds and validates a convex polyhedron from vertices and face cycles.
///
/// Cycles may be given in either orientation; each face is re-oriented so that
/// its normal points away from the vertex centroid.
pub fn build_polyhedron(
    vertices: &[Point3],
    cycles: &[Vec<usize>],
) -> Result<Polyhedron, GeometryError> {
    if vertices.len() < 4 {
        return Err(GeometryError::Degenerate(format!(
            "need at least 4 vertices, got {}",
            vertices.len()
        )));
    }
    if cycles.len() < 4 {
        return Err(GeometryError::NotClosed(format!(
            "need at least 4 faces, got {}",
            cycles.len()
        )));
    }
    if let Some(i) = vertices
        .iter()
        .position(|v| !v.coords.iter().all(|c| c.is_finite()))
    {
        return Err(GeometryError::Degenerate(format!(
            "vertex {i} has a non-finite coordinate"
        )));
    }

    let centroid = Point3::from(
        vertices
            .iter()
            .fold(Vector3::zeros(), |acc, v| acc + v.coords)
            / vertices.len() as f64,
    );
    let circumradius = vertices
        .iter()
        .map(|v| (v - centroid).norm())
        .fold(0.0, f64::max);
    if circumradius <= 0.0 {
        return Err(GeometryError::Degenerate("all vertices coincide".into()));
    }
    let eps_plane = PLANE_TOLERANCE * circumradius;

    let mut faces = Vec::with_capacity(cycles.len());
    for (fi, cycle) in cycles.iter().enumerate() {
        faces.push(fit_face(fi, cycle, vertices, &centroid, eps_plane)?);
    }

    for (fi, face) in faces.iter().enumerate() {
        for (vi, v) in vertices.iter().enumerate() {
            let excess = face.signed_distance(v);
            if excess > eps_plane {
                return Err(GeometryError::NotConvex {
                    face: fi,
                    vertex: vi,
                    excess,
                });
            }
        }
    }

    let edges = check_closed(&faces, vertices.len())?;

    let halfspaces = HalfspaceSystem {
        rows: faces
            .iter()
            .map(|f| Halfspace {
                normal: f.normal,
                offset: f.offset,
            })
            .collect(),
    };

    Ok(Polyhedron {
        vertices: vertices.to_vec(),
        faces,
        halfspaces,
        edges,
        centroid,
        circumradius,
    })
}

fn fit_face(
    fi: usize,
    cycle: &[usize],
    vertices: &[Point3],
    centroid: &Point3,
    eps_plane: f64,
) -> Result<Face, GeometryError> {
    if cycle.len() < 3 {
        return Err(GeometryError::InvalidCycle {
            face: fi,
            reason: format!("{} indices, need at least 3", cycle.len()),
        });
    }
    if let Some(&bad) = cycle.iter().find(|&&v| v >= vertices.len()) {
        return Err(GeometryError::InvalidCycle {
            face: fi,
            reason: format!("index {bad} out of range ({} vertices)", vertices.len()),
        });
    }
    let mut seen = cycle.to_vec();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(GeometryError::InvalidCycle {
            face: fi,
            reason: "repeated vertex index".into(),
        });
    }

    // Newell's method
    let n = cycle.len();
    let mut normal = Vector3::zeros();
    let mut mean = Vector3::zeros();
    for j in 0..n {
        let a = vertices[cycle[j]].coords;
        let b = vertices[cycle[(j + 1) % n]].coords;
        normal += Vector3::new(
            (a.y - b.y) * (a.z + b.z),
            (a.z - b.z) * (a.x + b.x),
            (a.x - b.x) * (a.y + b.y),
        );
        mean += a;
    }
    mean /= n as f64;

    // Newell's vector is twice the area vector.
    let area = 0.5 * normal.norm();
    let scale = (vertices[cycle[0]] - centroid).norm().max(eps_plane);
    if area <= 1e-12 * scale * scale {
        return Err(GeometryError::Degenerate(format!(
            "face {fi} has zero area (collinear cycle)"
        )));
    }
    let mut normal = normal / (2.0 * area);
    let mut offset = normal.dot(&mean);

    for &v in cycle {
        let deviation = (normal.dot(&vertices[v].coords) - offset).abs();
        if deviation > eps_plane {
            return Err(GeometryError::NonPlanarFace {
                face: fi,
                vertex: v,
                deviation,
            });
        }
    }

    let side = normal.dot(&centroid.coords) - offset;
    if side.abs() <= eps_plane {
        return Err(GeometryError::Degenerate(format!(
            "face {fi} passes through the centroid (flat solid)"
        )));
    }
    let mut cycle = cycle.to_vec();
    if side > 0.0 {
        normal = -normal;
        offset = -offset;
        cycle.reverse();
    }

    Ok(Face {
        cycle,
        normal,
        offset,
    })
}

/// Checks that every edge is used by exactly two faces in opposite directions
/// and that the Euler characteristic is 2. Returns the undirected edge list.
fn check_closed(faces: &[Face], vertex_count: usize) -> Result<Vec<[usize; 2]>, GeometryError> {
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    for (fi, face) in faces.iter().enumerate() {
        let n = face.cycle.len();
        for j in 0..n {
            let key = (face.cycle[j], face.cycle[(j + 1) % n]);
            if let Some(other) = directed.insert(key, fi) {
                return Err(GeometryError::NotClosed(format!(
                    "directed edge {}->{} appears in faces {other} and {fi}",
                    key.0, key.1
                )));
            }
        }
    }

    let mut edges = Vec::with_capacity(directed.len() / 2);
    for &(a, b) in directed.keys() {
        if !directed.contains_key(&(b, a)) {
            return Err(GeometryError::NotClosed(format!(
                "edge {a}-{b} is used by only one face"
            )));
        }
        if a < b {
            edges.push([a, b]);
        }
    }
    edges.sort_unstable();

    let euler = vertex_count as i64 - edges.len() as i64 + faces.len() as i64;
    if euler != 2 {
        return Err(GeometryError::NotClosed(format!(
            "V - E + F = {vertex_count} - {} + {} = {euler}, expected 2",
            edges.len(),
            faces.len()
        )));
    }
    Ok(edges)
}
