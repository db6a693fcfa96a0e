//! Solid-angle fields of convex polyhedra and extraction of their isoptic
//! surfaces, the level sets `{x : Omega(x) = alpha}` of the solid angle under
//! which the body is seen from `x`.
//!
//! The field is evaluated face by face: a face contributes when the viewpoint
//! lies strictly on the outer side of its plane, and its contribution is the
//! area of the spherical polygon it projects to, computed from the polygon's
//! interior angles (spherical excess).
//!
//! ```
//! use isoptic::geometry::{canonical_solid, Point3, SolidName};
//! use isoptic::solid_angle::{isoptic_field, FieldMode};
//!
//! let cube = canonical_solid(SolidName::Cube);
//! let value = isoptic_field(&cube, &Point3::new(0.0, 0.0, 1.0), FieldMode::VisibleSum).unwrap();
//! assert!((value.omega - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
//! ```

pub mod geometry;
pub mod isosurface;
pub mod mesh;
pub mod mesh_io;
pub mod oracles;
pub mod solid_angle;

pub use geometry::{build_polyhedron, canonical_solid, Containment, Point3, Polyhedron, SolidName};
pub use mesh::TriangleMesh;
pub use solid_angle::{isoptic_field, FieldMode, FieldValue};

/// Solid angle of the full sphere.
pub const FULL_SPHERE: f64 = 4.0 * std::f64::consts::PI;
