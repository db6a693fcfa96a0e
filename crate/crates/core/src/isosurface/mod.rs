//! Isoptic surface extraction: bound the level set, sample `F(x) - alpha`
//! on a lattice, and polygonize it with marching cubes.

mod marching_cubes;

use std::f64::consts::PI;

use nalgebra::Vector3;
use rayon::prelude::*;
use thiserror::Error;

pub use marching_cubes::{case_loops, case_table, marching_cubes, EDGES};

use crate::geometry::Point3;
use crate::geometry::Polyhedron;
pub use crate::mesh::TriangleMesh;
use crate::solid_angle::{isoptic_field, FieldMode, SolidAngleError};
use crate::FULL_SPHERE;

/// Sampling box half-width as a multiple of the bounding radius.
pub const BOX_MARGIN: f64 = 1.05;
/// Default nodes per axis.
pub const DEFAULT_RESOLUTION: usize = 96;
pub const MIN_RESOLUTION: usize = 16;
const MIN_GRID_NODES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IsoError {
    #[error("alpha = {0} is outside (0, 2 pi)")]
    BadAlpha(f64),
    #[error("resolution {0} is below the minimum of {min}", min = MIN_RESOLUTION)]
    BadResolution(usize),
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error("grid box does not contain the bounding ball of the level set")]
    BoxTooSmall,
    #[error("grid value {0} is not finite")]
    NonFinite(usize),
    #[error("level set reaches the grid boundary")]
    SurfaceTouchesBoundary,
    #[error("no sign change in the grid; the surface is empty at this resolution")]
    EmptySurface,
}

fn check_alpha(alpha: f64) -> Result<(), IsoError> {
    if alpha > 0.0 && alpha < 2.0 * PI {
        Ok(())
    } else {
        Err(IsoError::BadAlpha(alpha))
    }
}

/// Radius around the centroid that contains every point with `F(x) = alpha`.
///
/// The body lies in its circumball of radius `R`, which subtends
/// `2 pi (1 - sqrt(1 - (R/d)^2))` at distance `d`; that drops below `alpha`
/// beyond `d = R / sqrt(1 - (1 - alpha / 2 pi)^2)`.
pub fn bounding_radius(p: &Polyhedron, alpha: f64) -> Result<f64, IsoError> {
    check_alpha(alpha)?;
    let c = 1.0 - alpha / (2.0 * PI);
    Ok(p.circumradius() / (1.0 - c * c).sqrt())
}

/// Axis-aligned lattice with `res[a]` nodes along axis `a`, corners included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: Point3,
    pub hi: Point3,
    pub res: [usize; 3],
}

impl GridSpec {
    pub fn new(lo: Point3, hi: Point3, res: [usize; 3]) -> Result<Self, IsoError> {
        if res.iter().any(|&n| n < MIN_GRID_NODES) {
            return Err(IsoError::BadGrid(format!(
                "need at least {MIN_GRID_NODES} nodes per axis, got {res:?}"
            )));
        }
        if (0..3).any(|a| lo[a] >= hi[a] || !lo[a].is_finite() || !hi[a].is_finite()) {
            return Err(IsoError::BadGrid(format!("empty box {lo} .. {hi}")));
        }
        Ok(Self { lo, hi, res })
    }

    /// Cube of half-width `half` around `center` with `res` nodes per axis.
    pub fn cube(center: Point3, half: f64, res: usize) -> Result<Self, IsoError> {
        let h = Vector3::repeat(half);
        Self::new(center - h, center + h, [res; 3])
    }

    pub fn node_count(&self) -> usize {
        self.res.iter().product()
    }

    pub fn step(&self) -> Vector3<f64> {
        Vector3::from_fn(|a, _| (self.hi[a] - self.lo[a]) / (self.res[a] - 1) as f64)
    }

    pub fn cell_diagonal(&self) -> f64 {
        self.step().norm()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.res[0] * (j + self.res[1] * k)
    }

    #[inline]
    pub fn coords_of(&self, n: usize) -> [usize; 3] {
        let i = n % self.res[0];
        let j = (n / self.res[0]) % self.res[1];
        let k = n / (self.res[0] * self.res[1]);
        [i, j, k]
    }

    #[inline]
    pub fn node(&self, i: usize, j: usize, k: usize) -> Point3 {
        let step = self.step();
        Point3::new(
            self.lo.x + i as f64 * step.x,
            self.lo.y + j as f64 * step.y,
            self.lo.z + k as f64 * step.z,
        )
    }

    #[inline]
    pub fn node_at(&self, n: usize) -> Point3 {
        let [i, j, k] = self.coords_of(n);
        self.node(i, j, k)
    }

    /// Does the box contain the closed ball?
    pub fn contains_ball(&self, center: &Point3, radius: f64) -> bool {
        (0..3).all(|a| self.lo[a] <= center[a] - radius && center[a] + radius <= self.hi[a])
    }
}

/// Samples of a scalar function on a [`GridSpec`], x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl ScalarGrid {
    /// Evaluates `f` at every node in parallel.
    pub fn sample<F>(spec: GridSpec, f: F) -> Self
    where
        F: Fn(&Point3) -> f64 + Sync,
    {
        let values = (0..spec.node_count())
            .into_par_iter()
            .map(|n| f(&spec.node_at(n)))
            .collect();
        Self { spec, values }
    }

    /// Central-difference gradient at node `n` (one-sided on the shell).
    pub fn gradient_at(&self, n: usize) -> Vector3<f64> {
        let ijk = self.spec.coords_of(n);
        let step = self.spec.step();
        let strides = [1, self.spec.res[0], self.spec.res[0] * self.spec.res[1]];
        Vector3::from_fn(|a, _| {
            let lo = if ijk[a] > 0 { n - strides[a] } else { n };
            let hi = if ijk[a] + 1 < self.spec.res[a] {
                n + strides[a]
            } else {
                n
            };
            let span = (self.spec.coords_of(hi)[a] - self.spec.coords_of(lo)[a]) as f64 * step[a];
            (self.values[hi] - self.values[lo]) / span
        })
    }
}

/// Field value at `x`, nudging off edge lines deterministically when needed.
fn field_minus_alpha(p: &Polyhedron, alpha: f64, x: &Point3, nudge: &Vector3<f64>) -> f64 {
    let mut k = 0.0;
    loop {
        let q = x + nudge * k;
        match isoptic_field(p, &q, FieldMode::VisibleSum) {
            Ok(v) => return v.omega - alpha,
            Err(SolidAngleError::SingularRay { .. }) => k += 1.0,
            Err(SolidAngleError::OnFace { .. }) => return FULL_SPHERE - alpha,
        }
    }
}

/// Samples `F(x) - alpha` over `spec`. Interior and boundary nodes get
/// `4 pi - alpha`; nodes on an edge line are re-evaluated after a shift of
/// `1e-7` cells along (1, 1, 1).
pub fn sample_field_grid(
    p: &Polyhedron,
    alpha: f64,
    spec: GridSpec,
) -> Result<ScalarGrid, IsoError> {
    let d = bounding_radius(p, alpha)?;
    if !spec.contains_ball(&p.centroid(), BOX_MARGIN * d) {
        return Err(IsoError::BoxTooSmall);
    }
    let nudge = spec.step() * 1e-7;
    Ok(ScalarGrid::sample(spec, |x| {
        field_minus_alpha(p, alpha, x, &nudge)
    }))
}

/// Grid used by [`extract_isoptic`]: a cube of half-width `1.05 d` around the centroid.
pub fn isoptic_grid_spec(p: &Polyhedron, alpha: f64, res: usize) -> Result<GridSpec, IsoError> {
    if res < MIN_RESOLUTION {
        return Err(IsoError::BadResolution(res));
    }
    let d = bounding_radius(p, alpha)?;
    GridSpec::cube(p.centroid(), BOX_MARGIN * d, res)
}

/// Triangle mesh of `{x : F(x) = alpha}` with `res` lattice nodes per axis.
pub fn extract_isoptic(p: &Polyhedron, alpha: f64, res: usize) -> Result<TriangleMesh, IsoError> {
    let spec = isoptic_grid_spec(p, alpha, res)?;
    let grid = sample_field_grid(p, alpha, spec)?;
    marching_cubes(&grid)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub max_abs: f64,
    pub rms: f64,
    pub evaluated: usize,
    pub skipped: usize,
}

/// `max` and `rms` of `|g(v)|` over mesh vertices; `None` values are skipped.
pub fn mesh_residual_with<G>(mesh: &TriangleMesh, g: G) -> Residual
where
    G: Fn(&Point3) -> Option<f64> + Sync,
{
    let samples: Vec<Option<f64>> = mesh.vertices.par_iter().map(&g).collect();
    let mut max_abs = 0.0f64;
    let mut sum_sq = 0.0;
    let mut evaluated = 0;
    for r in samples.iter().flatten() {
        max_abs = max_abs.max(r.abs());
        sum_sq += r * r;
        evaluated += 1;
    }
    Residual {
        max_abs,
        rms: if evaluated > 0 {
            (sum_sq / evaluated as f64).sqrt()
        } else {
            0.0
        },
        evaluated,
        skipped: samples.len() - evaluated,
    }
}

/// Re-evaluates the field at every mesh vertex and reports `|F - alpha|`.
pub fn mesh_residual(p: &Polyhedron, alpha: f64, mesh: &TriangleMesh) -> Residual {
    mesh_residual_with(mesh, |v| {
        isoptic_field(p, v, FieldMode::VisibleSum)
            .ok()
            .map(|f| f.omega - alpha)
    })
}
