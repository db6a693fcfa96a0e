//! The solid-angle field of a convex polyhedron.
//!
//! For a viewpoint `x` outside the body, face `i` is visible when
//! `a_i . x > b_i`. A visible face projects to a convex spherical polygon on
//! the unit sphere around `x`; its area is the spherical excess
//! `sum(tau_j) - (n - 2) pi`, where `tau_j` is the angle between the planes
//! through `x` spanned by the two edges meeting at vertex `j`. The field is the
//! sum of those areas over visible faces. Because a closed convex surface
//! covers its image twice, half the sum over all faces gives the same value.

use std::f64::consts::PI;

use nalgebra::Vector3;
use thiserror::Error;

use crate::geometry::{Containment, Point3, Polyhedron};
use crate::FULL_SPHERE;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolidAngleError {
    #[error("query point lies on the line through an edge (distance {distance:e})")]
    SingularRay { distance: f64 },
    #[error("query point lies on face {face}; its solid angle is undefined there")]
    OnFace { face: usize },
}

/// How the field sums face contributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldMode {
    /// Sum over faces whose plane the viewpoint is strictly outside of.
    #[default]
    VisibleSum,
    /// Half the sum over all faces.
    HalfSum,
}

impl std::str::FromStr for FieldMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "visible" | "visible_sum" => Ok(FieldMode::VisibleSum),
            "half" | "half_sum" => Ok(FieldMode::HalfSum),
            other => Err(format!("unknown mode `{other}` (expected visible or half)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldValue {
    /// Solid angle in steradians; `4 pi` for points inside or on the body.
    pub omega: f64,
    /// Faces with a positive visibility indicator, ascending.
    pub visible_faces: Vec<usize>,
    pub containment: Containment,
}

/// A polyhedron bound to an evaluation mode.
#[derive(Debug, Clone, Copy)]
pub struct SolidAngleField<'a> {
    pub polyhedron: &'a Polyhedron,
    pub mode: FieldMode,
}

impl<'a> SolidAngleField<'a> {
    pub fn new(polyhedron: &'a Polyhedron, mode: FieldMode) -> Self {
        Self { polyhedron, mode }
    }

    pub fn eval(&self, x: &Point3) -> Result<FieldValue, SolidAngleError> {
        isoptic_field(self.polyhedron, x, self.mode)
    }

    pub fn omega(&self, x: &Point3) -> Result<f64, SolidAngleError> {
        self.eval(x).map(|v| v.omega)
    }
}

/// Visibility indicator of face `i`: true iff `a_i . x > b_i`.
#[inline]
pub fn face_visible(p: &Polyhedron, i: usize, x: &Point3) -> bool {
    let row = &p.halfspaces().rows[i];
    row.normal.dot(&x.coords) > row.offset
}

/// Angle between two vectors, in `[0, pi]`.
///
/// Same value as `acos(a.b / |a||b|)` with the cosine clamped to `[-1, 1]`,
/// but accurate near 0 and pi where `acos` loses half the digits.
#[inline]
fn angle_between(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Distance from the viewpoint to the line through two vertices, given the
/// vectors `ra`, `rb` from the viewpoint to the vertices and their cross product.
#[inline]
fn line_distance(ra: &Vector3<f64>, rb: &Vector3<f64>, cross: &Vector3<f64>) -> f64 {
    let chord = (rb - ra).norm();
    if chord == 0.0 {
        ra.norm()
    } else {
        cross.norm() / chord
    }
}

/// Interior angle at `v` of the spherical polygon obtained by projecting
/// `v_prev, v, v_next` onto the unit sphere around `x`.
///
/// `eps_sing` is the distance below which `x` counts as lying on one of the
/// two edge lines.
pub fn wedge_angle(
    x: &Point3,
    v_prev: &Point3,
    v: &Point3,
    v_next: &Point3,
    eps_sing: f64,
) -> Result<f64, SolidAngleError> {
    let r_prev = v_prev - x;
    let r = v - x;
    let r_next = v_next - x;
    let c_in = r_prev.cross(&r);
    let c_out = r.cross(&r_next);
    for (a, b, c) in [(&r_prev, &r, &c_in), (&r, &r_next, &c_out)] {
        let distance = line_distance(a, b, c);
        if distance < eps_sing || c.norm() == 0.0 {
            return Err(SolidAngleError::SingularRay { distance });
        }
    }
    Ok(PI - angle_between(&c_in, &c_out))
}

/// Spherical excess of the polygon `cycle` (indices into `vertices`) seen from `x`.
fn spherical_excess(
    x: &Point3,
    vertices: &[Point3],
    cycle: &[usize],
    eps_sing: f64,
) -> Result<f64, SolidAngleError> {
    let n = cycle.len();
    let r = |j: usize| vertices[cycle[j % n]] - x;

    let mut r_cur = r(0);
    let r_last = r(n - 1);
    let mut c_prev = r_last.cross(&r_cur);
    let d = line_distance(&r_last, &r_cur, &c_prev);
    if d < eps_sing || c_prev.norm() == 0.0 {
        return Err(SolidAngleError::SingularRay { distance: d });
    }

    let mut angle_sum = 0.0;
    for j in 1..=n {
        let r_next = r(j);
        let c_next = r_cur.cross(&r_next);
        let d = line_distance(&r_cur, &r_next, &c_next);
        if d < eps_sing || c_next.norm() == 0.0 {
            return Err(SolidAngleError::SingularRay { distance: d });
        }
        angle_sum += PI - angle_between(&c_prev, &c_next);
        c_prev = c_next;
        r_cur = r_next;
    }
    Ok(angle_sum - (n as f64 - 2.0) * PI)
}

/// Solid angle subtended by face `i` at `x`, in `[0, 2 pi)`.
///
/// Returns 0 for a point in the face plane outside the polygon, `OnFace` for a
/// point on the polygon itself, and `SingularRay` for a point on an edge line.
pub fn face_solid_angle(p: &Polyhedron, i: usize, x: &Point3) -> Result<f64, SolidAngleError> {
    let face = &p.faces()[i];
    let eps_sing = p.eps_sing();

    if face.signed_distance(x).abs() <= p.eps_plane() {
        let n = face.cycle.len();
        let verts = p.vertices();
        let mut inside = true;
        for j in 0..n {
            let a = verts[face.cycle[j]];
            let b = verts[face.cycle[(j + 1) % n]];
            let (ra, rb) = (a - x, b - x);
            let c = ra.cross(&rb);
            let distance = line_distance(&ra, &rb, &c);
            if distance < eps_sing {
                return Err(SolidAngleError::SingularRay { distance });
            }
            // x is left of a->b (inside for a counterclockwise cycle) when
            // (b - a) x (x - a) points along the normal.
            if (b - a).cross(&(x - a)).dot(&face.normal) < 0.0 {
                inside = false;
            }
        }
        return if inside {
            Err(SolidAngleError::OnFace { face: i })
        } else {
            Ok(0.0)
        };
    }

    let omega = spherical_excess(x, p.vertices(), &face.cycle, eps_sing)?;
    Ok(omega.max(0.0))
}

/// Solid angle under which the polyhedron is seen from `x`.
///
/// Points inside or on the body get `4 pi`.
pub fn isoptic_field(
    p: &Polyhedron,
    x: &Point3,
    mode: FieldMode,
) -> Result<FieldValue, SolidAngleError> {
    let containment = p.contains_point(x);
    if containment != Containment::Outside {
        return Ok(FieldValue {
            omega: FULL_SPHERE,
            visible_faces: Vec::new(),
            containment,
        });
    }

    let eps_plane = p.eps_plane();
    let mut visible_faces = Vec::new();
    let mut sum = 0.0;
    for (i, face) in p.faces().iter().enumerate() {
        let dist = face.signed_distance(x);
        let visible = dist > 0.0;
        if visible {
            visible_faces.push(i);
        }
        match mode {
            FieldMode::VisibleSum => {
                // Faces grazing the viewpoint are still evaluated so that a
                // point on an edge line is reported consistently.
                if dist > -eps_plane {
                    let omega = face_solid_angle(p, i, x)?;
                    if visible {
                        sum += omega;
                    }
                }
            }
            FieldMode::HalfSum => sum += face_solid_angle(p, i, x)?,
        }
    }
    if mode == FieldMode::HalfSum {
        sum *= 0.5;
    }

    Ok(FieldValue {
        omega: sum,
        visible_faces,
        containment,
    })
}
