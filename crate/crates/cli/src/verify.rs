//! The oracle battery behind `isoptic verify`.

use isoptic::geometry::{Containment, Point3, Polyhedron};
use isoptic::oracles::{fan_face_solid_angle, mc_field, SplitMix64};
use isoptic::solid_angle::{face_solid_angle, isoptic_field, FieldMode};
use isoptic::FULL_SPHERE;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
}

const EXTERIOR_POINTS: usize = 1000;
const FAN_POINTS: usize = 100;
const MC_POINTS: usize = 20;
const INTERIOR_POINTS: usize = 100;

pub fn run(p: &Polyhedron, samples: u64, seed: u64) -> Vec<Check> {
    vec![
        mode_equivalence(p, seed),
        fan_equivalence(p, seed.wrapping_add(1)),
        monte_carlo(p, samples, seed.wrapping_add(2)),
        interior_sum(p, seed.wrapping_add(3)),
    ]
}

fn exterior_point(rng: &mut SplitMix64, p: &Polyhedron, lo: f64, hi: f64) -> Point3 {
    let (c, r) = p.circumsphere();
    loop {
        let x = c + rng.next_direction() * (r * hi * rng.next_f64().cbrt());
        if (x - c).norm() >= lo * r
            && p.contains_point(&x) == Containment::Outside
            && isoptic_field(p, &x, FieldMode::VisibleSum).is_ok()
        {
            return x;
        }
    }
}

fn interior_point(rng: &mut SplitMix64, p: &Polyhedron) -> Point3 {
    let c = p.centroid();
    loop {
        let w: Vec<f64> = p
            .vertices()
            .iter()
            .map(|_| -(1.0 - rng.next_f64()).ln())
            .collect();
        let total: f64 = w.iter().sum();
        let mut x = c;
        for (v, wi) in p.vertices().iter().zip(&w) {
            x += (v - c) * (0.99 * wi / total);
        }
        if p.contains_point(&x) == Containment::Inside {
            return x;
        }
    }
}

fn mode_equivalence(p: &Polyhedron, seed: u64) -> Check {
    let mut rng = SplitMix64::new(seed);
    let mut worst = 0.0f64;
    for _ in 0..EXTERIOR_POINTS {
        let x = exterior_point(&mut rng, p, 0.0, 5.0);
        let a = isoptic_field(p, &x, FieldMode::VisibleSum).map(|v| v.omega);
        let b = isoptic_field(p, &x, FieldMode::HalfSum).map(|v| v.omega);
        worst = match (a, b) {
            (Ok(a), Ok(b)) => worst.max((a - b).abs()),
            _ => f64::INFINITY,
        };
    }
    Check {
        name: "mode-equivalence",
        passed: worst <= 1e-9,
        summary: format!(
            "max |visible - half| = {worst:.3e} over {EXTERIOR_POINTS} points (tol 1e-9)"
        ),
    }
}

fn fan_equivalence(p: &Polyhedron, seed: u64) -> Check {
    let mut rng = SplitMix64::new(seed);
    let mut worst = 0.0f64;
    for _ in 0..FAN_POINTS {
        let x = exterior_point(&mut rng, p, 0.0, 5.0);
        for i in 0..p.faces().len() {
            worst = match (face_solid_angle(p, i, &x), fan_face_solid_angle(p, i, &x)) {
                (Ok(a), Ok(b)) => worst.max((a - b).abs()),
                _ => f64::INFINITY,
            };
        }
    }
    Check {
        name: "fan-oracle",
        passed: worst <= 1e-10,
        summary: format!(
            "max |face - fan| = {worst:.3e} over {FAN_POINTS} points x {} faces (tol 1e-10)",
            p.faces().len()
        ),
    }
}

fn monte_carlo(p: &Polyhedron, samples: u64, seed: u64) -> Check {
    let mut rng = SplitMix64::new(seed);
    let mut within = 0;
    let mut worst_sigma = 0.0f64;
    for k in 0..MC_POINTS {
        let x = exterior_point(&mut rng, p, 1.2, 4.0);
        let omega = isoptic_field(p, &x, FieldMode::VisibleSum).map(|v| v.omega);
        let est = mc_field(p, &x, samples, seed.wrapping_add(1000 + k as u64));
        if let (Ok(omega), Ok(est)) = (omega, est) {
            let sigmas = (omega - est.estimate).abs() / est.stderr;
            worst_sigma = worst_sigma.max(sigmas);
            if sigmas <= 4.0 {
                within += 1;
            }
        }
    }
    Check {
        name: "monte-carlo",
        passed: within >= MC_POINTS - 1,
        summary: format!(
            "{within}/{MC_POINTS} points within 4 stderr at N = {samples}, worst {worst_sigma:.2} stderr"
        ),
    }
}

fn interior_sum(p: &Polyhedron, seed: u64) -> Check {
    let mut rng = SplitMix64::new(seed);
    let mut worst = 0.0f64;
    for _ in 0..INTERIOR_POINTS {
        let x = interior_point(&mut rng, p);
        let total: Result<f64, _> = (0..p.faces().len())
            .map(|i| face_solid_angle(p, i, &x))
            .sum();
        worst = match total {
            Ok(t) => worst.max((t - FULL_SPHERE).abs()),
            Err(_) => f64::INFINITY,
        };
    }
    Check {
        name: "interior-sum",
        passed: worst <= 1e-8,
        summary: format!("max |sum - 4 pi| = {worst:.3e} over {INTERIOR_POINTS} points (tol 1e-8)"),
    }
}
