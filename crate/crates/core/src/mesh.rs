//! Indexed triangle meshes and the topology checks run on extracted surfaces.

use std::collections::HashMap;

use nalgebra::Vector3;

use crate::geometry::Point3;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<Point3>,
    pub triangles: Vec<[usize; 3]>,
    /// Per-vertex unit normals; either empty or one per vertex.
    pub normals: Vec<Vector3<f64>>,
}

/// Edge-incidence summary of a triangle mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Topology {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    /// Edges not shared by exactly two triangles.
    pub non_manifold_edges: usize,
    /// Interior edges traversed twice in the same direction.
    pub inconsistent_edges: usize,
    pub components: usize,
}

impl Topology {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64
    }

    /// Closed, consistently oriented 2-manifold.
    pub fn is_watertight(&self) -> bool {
        self.non_manifold_edges == 0 && self.inconsistent_edges == 0
    }

    /// Watertight, connected, and Euler characteristic 2.
    pub fn is_sphere(&self) -> bool {
        self.is_watertight() && self.components == 1 && self.euler_characteristic() == 2
    }
}

impl TriangleMesh {
    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        let (a, b, c) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        0.5 * (b - a).cross(&(c - a)).norm()
    }

    /// Unit normal of triangle `t` from the right-hand rule, or zero if degenerate.
    pub fn triangle_normal(&self, t: usize) -> Vector3<f64> {
        let [a, b, c] = self.triangles[t];
        let (a, b, c) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        (b - a)
            .cross(&(c - a))
            .try_normalize(0.0)
            .unwrap_or_else(Vector3::zeros)
    }

    pub fn topology(&self) -> Topology {
        let mut directed: HashMap<(usize, usize), u32> = HashMap::new();
        for tri in &self.triangles {
            for k in 0..3 {
                *directed.entry((tri[k], tri[(k + 1) % 3])).or_default() += 1;
            }
        }
        let mut undirected: HashMap<(usize, usize), u32> = HashMap::new();
        let mut inconsistent = 0;
        for (&(a, b), &count) in &directed {
            *undirected.entry((a.min(b), a.max(b))).or_default() += count;
            if count > 1 {
                inconsistent += 1;
            }
        }
        let non_manifold = undirected.values().filter(|&&c| c != 2).count();

        let used: Vec<bool> = {
            let mut u = vec![false; self.vertices.len()];
            for tri in &self.triangles {
                for &v in tri {
                    u[v] = true;
                }
            }
            u
        };
        let mut dsu = DisjointSet::new(self.vertices.len());
        for tri in &self.triangles {
            dsu.union(tri[0], tri[1]);
            dsu.union(tri[1], tri[2]);
        }
        let components = (0..self.vertices.len())
            .filter(|&v| used[v] && dsu.find(v) == v)
            .count();

        Topology {
            vertices: used.iter().filter(|&&u| u).count(),
            edges: undirected.len(),
            faces: self.triangles.len(),
            non_manifold_edges: non_manifold,
            inconsistent_edges: inconsistent,
            components,
        }
    }

    /// Signed enclosed volume; positive when triangles face outward.
    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|&[a, b, c]| {
                let (a, b, c) = (self.vertices[a], self.vertices[b], self.vertices[c]);
                a.coords.dot(&b.coords.cross(&c.coords)) / 6.0
            })
            .sum()
    }
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
