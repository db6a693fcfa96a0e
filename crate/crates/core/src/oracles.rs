//! Reference computations that share no code path with [`crate::solid_angle`]:
//! Monte Carlo ray casting against the halfspace system, and the
//! Van Oosterom-Strackee closed form for triangles summed over a fan.

use std::f64::consts::PI;

use nalgebra::Vector3;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{Containment, Point3, Polyhedron};
use crate::FULL_SPHERE;

/// Smallest sample count accepted by [`mc_field`].
pub const MIN_SAMPLES: u64 = 1_000;

/// Directions per independently seeded substream.
const CHUNK: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("triangle is degenerate as seen from the query point")]
    Degenerate,
    #[error("{0} samples requested, at least {MIN_SAMPLES} required")]
    TooFewSamples(u64),
}

/// SplitMix64 (Steele, Lea, Flood 2014): each step adds
/// `0x9e3779b97f4a7c15` to the state and returns [`mix64`] of the new state.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Pair of independent standard normals (Box-Muller).
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.next_f64(); // (0, 1]
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        (r * c, r * s)
    }

    /// Uniform direction on the unit sphere from a normalized 3D Gaussian.
    pub fn next_direction(&mut self) -> Vector3<f64> {
        loop {
            let (a, b) = self.next_gaussian_pair();
            let (c, _) = self.next_gaussian_pair();
            let v = Vector3::new(a, b, c);
            let n = v.norm();
            if n > 1e-300 {
                return v / n;
            }
        }
    }
}

/// SplitMix64 output finalizer:
/// `z = (z ^ z>>30) * 0xbf58476d1ce4e5b9; z = (z ^ z>>27) * 0x94d049bb133111eb; z ^ z>>31`.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of substream `index` derived from a user seed.
pub fn substream_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index.wrapping_add(0x632b_e59b_d9b4_e019)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Does the ray `x + t dir`, `t > 0`, meet the polyhedron?
///
/// Each row `n . y <= b` restricts `t` to a half-line; the ray hits iff the
/// intersection of those intervals with `t > 0` is nonempty.
pub fn ray_hits(p: &Polyhedron, x: &Point3, dir: &Vector3<f64>) -> bool {
    let mut t_enter = 0.0f64;
    let mut t_exit = f64::INFINITY;
    for row in &p.halfspaces().rows {
        let denom = row.normal.dot(dir);
        let slack = row.offset - row.normal.dot(&x.coords);
        if denom == 0.0 {
            if slack < 0.0 {
                return false;
            }
        } else {
            let t = slack / denom;
            if denom > 0.0 {
                t_exit = t_exit.min(t);
            } else {
                t_enter = t_enter.max(t);
            }
        }
        if t_enter > t_exit {
            return false;
        }
    }
    t_exit > 0.0
}

/// Monte Carlo estimate of the solid angle of `p` seen from `x`.
///
/// Directions are drawn in chunks of 65536, chunk `k` from a SplitMix64
/// seeded with [`substream_seed`]`(seed, k)`, so the result does not depend
/// on how many threads evaluate the chunks.
pub fn mc_field(
    p: &Polyhedron,
    x: &Point3,
    samples: u64,
    seed: u64,
) -> Result<McEstimate, OracleError> {
    if samples < MIN_SAMPLES {
        return Err(OracleError::TooFewSamples(samples));
    }
    if p.contains_point(x) != Containment::Outside {
        return Ok(McEstimate {
            estimate: FULL_SPHERE,
            stderr: 0.0,
            samples,
            seed,
        });
    }

    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let count = CHUNK.min(samples - k * CHUNK);
            let mut rng = SplitMix64::new(substream_seed(seed, k));
            (0..count)
                .filter(|_| ray_hits(p, x, &rng.next_direction()))
                .count() as u64
        })
        .sum();

    let frac = hits as f64 / samples as f64;
    Ok(McEstimate {
        estimate: FULL_SPHERE * frac,
        stderr: FULL_SPHERE * (frac * (1.0 - frac) / samples as f64).sqrt(),
        samples,
        seed,
    })
}

/// Unsigned solid angle of triangle `v1 v2 v3` seen from `x`:
/// `tan(Omega / 2) = |r1 . (r2 x r3)| /
///  (|r1||r2||r3| + (r1.r2)|r3| + (r1.r3)|r2| + (r2.r3)|r1|)`.
pub fn vos_triangle(x: &Point3, v1: &Point3, v2: &Point3, v3: &Point3) -> Result<f64, OracleError> {
    let (r1, r2, r3) = (v1 - x, v2 - x, v3 - x);
    let (l1, l2, l3) = (r1.norm(), r2.norm(), r3.norm());
    let scale = l1 * l2 * l3;
    if scale == 0.0 {
        return Err(OracleError::Degenerate);
    }
    let det = r1.dot(&r2.cross(&r3)).abs();
    let denom = scale + r1.dot(&r2) * l3 + r1.dot(&r3) * l2 + r2.dot(&r3) * l1;
    let tiny = 1e-14 * scale;
    if det <= tiny && denom <= tiny {
        // in the triangle's plane and inside (or on) it
        return Err(OracleError::Degenerate);
    }
    Ok(2.0 * det.atan2(denom))
}

/// Solid angle of face `i` as a fan of triangles from its first vertex.
pub fn fan_face_solid_angle(p: &Polyhedron, i: usize, x: &Point3) -> Result<f64, OracleError> {
    let verts: Vec<&Point3> = p.face_vertices(i).collect();
    let apex = verts[0];
    verts[1..]
        .windows(2)
        .map(|w| vos_triangle(x, apex, w[0], w[1]))
        .sum()
}
