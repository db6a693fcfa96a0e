//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use isoptic::geometry::{Containment, Point3, Polyhedron};
use isoptic::oracles::SplitMix64;
use isoptic::solid_angle::face_visible;
use nalgebra::{Matrix3, Vector3};

/// Uniform point in the ball of radius `r` around `c`.
pub fn point_in_ball(rng: &mut SplitMix64, c: &Point3, r: f64) -> Point3 {
    let u = rng.next_f64().cbrt();
    c + rng.next_direction() * (r * u)
}

/// Random strict interior point: a convex combination of the vertices pulled
/// slightly toward the centroid.
pub fn interior_point(rng: &mut SplitMix64, p: &Polyhedron) -> Point3 {
    loop {
        let w: Vec<f64> = p
            .vertices()
            .iter()
            .map(|_| -(1.0 - rng.next_f64()).ln())
            .collect();
        let total: f64 = w.iter().sum();
        let mix = p
            .vertices()
            .iter()
            .zip(&w)
            .fold(Vector3::zeros(), |acc, (v, wi)| {
                acc + v.coords * (wi / total)
            });
        let x = p.centroid() + (mix - p.centroid().coords) * 0.99;
        if p.contains_point(&x) == Containment::Inside {
            return x;
        }
    }
}

/// Random exterior point with `lo * R < |x - c| < hi * R` that keeps a
/// relative distance of at least `1e-6 R` from every edge line.
pub fn exterior_point(rng: &mut SplitMix64, p: &Polyhedron, lo: f64, hi: f64) -> Point3 {
    let (c, r) = p.circumsphere();
    loop {
        let x = point_in_ball(rng, &c, hi * r);
        if (x - c).norm() < lo * r || p.contains_point(&x) != Containment::Outside {
            continue;
        }
        if min_edge_line_distance(p, &x) > 1e-6 * r {
            return x;
        }
    }
}

pub fn min_edge_line_distance(p: &Polyhedron, x: &Point3) -> f64 {
    p.edges()
        .iter()
        .map(|&[a, b]| {
            let (ra, rb) = (p.vertices()[a] - x, p.vertices()[b] - x);
            ra.cross(&rb).norm() / (rb - ra).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn visible_faces(p: &Polyhedron, x: &Point3) -> Vec<usize> {
    (0..p.faces().len())
        .filter(|&i| face_visible(p, i, x))
        .collect()
}

/// Proper rotations about the centroid that map the vertex set onto itself,
/// found by matching every (vertex, neighbour) frame against a reference frame.
pub fn rotation_group(p: &Polyhedron) -> Vec<Matrix3<f64>> {
    let c = p.centroid().coords;
    let v: Vec<Vector3<f64>> = p.vertices().iter().map(|q| q.coords - c).collect();
    let mut neighbours = vec![Vec::new(); v.len()];
    for &[a, b] in p.edges() {
        neighbours[a].push(b);
        neighbours[b].push(a);
    }
    let frame = |a: usize, b: usize| {
        let e1 = v[a].normalize();
        let e2 = (v[b] - e1 * e1.dot(&v[b])).normalize();
        Matrix3::from_columns(&[e1, e2, e1.cross(&e2)])
    };
    let reference = frame(0, neighbours[0][0]);
    let tol = 1e-9 * p.circumradius();
    let mut group: Vec<Matrix3<f64>> = Vec::new();
    for (a, adjacent) in neighbours.iter().enumerate() {
        for &b in adjacent {
            let g = frame(a, b) * reference.transpose();
            let maps_onto = v.iter().all(|x| v.iter().any(|y| (g * x - y).norm() < tol));
            if maps_onto && !group.iter().any(|h| (h - g).norm() < 1e-9) {
                group.push(g);
            }
        }
    }
    group
}

pub fn rotate_about(c: &Point3, g: &Matrix3<f64>, x: &Point3) -> Point3 {
    c + g * (x - c)
}

/// Bucketed point set for nearest-neighbour queries within a fixed radius.
pub struct PointHash {
    cell: f64,
    buckets: HashMap<[i64; 3], Vec<Point3>>,
}

impl PointHash {
    pub fn new(points: &[Point3], cell: f64) -> Self {
        let mut buckets: HashMap<[i64; 3], Vec<Point3>> = HashMap::new();
        for q in points {
            buckets.entry(Self::key(q, cell)).or_default().push(*q);
        }
        Self { cell, buckets }
    }

    fn key(q: &Point3, cell: f64) -> [i64; 3] {
        [
            (q.x / cell).floor() as i64,
            (q.y / cell).floor() as i64,
            (q.z / cell).floor() as i64,
        ]
    }

    /// Whether some stored point lies within `self.cell` of `q`.
    pub fn has_near(&self, q: &Point3) -> bool {
        let k = Self::key(q, self.cell);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(b) = self.buckets.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        if b.iter().any(|s| (s - q).norm() <= self.cell) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}
