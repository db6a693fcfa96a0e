mod common;

use std::f64::consts::PI;

use isoptic::geometry::{canonical_solid, Containment, Point3, SolidName};
use isoptic::oracles::{fan_face_solid_angle, mc_field, ray_hits, SplitMix64};
use isoptic::solid_angle::face_solid_angle;

use common::{exterior_point, point_in_ball};

#[test]
fn ray_hits_matches_dense_segment_sampling() {
    let p = canonical_solid(SolidName::TruncatedCube);
    let (c, r) = p.circumsphere();
    let mut rng = SplitMix64::new(11);
    let mut hits = 0;
    for _ in 0..10_000 {
        let x = point_in_ball(&mut rng, &c, 3.0 * r);
        if p.contains_point(&x) != Containment::Outside {
            continue;
        }
        let dir = rng.next_direction();
        let expected = ray_hits(&p, &x, &dir);
        // Walk far enough to cross the whole body; the step is fine enough that
        // only rays grazing within ~1e-3 R could be misjudged, so skip those.
        let reach = (x - c).norm() + r;
        let steps = 20_000;
        let mut sampled = false;
        let mut margin = f64::INFINITY;
        for k in 1..=steps {
            let y = x + dir * (reach * k as f64 / steps as f64);
            let v = p.halfspaces().max_violation(&y);
            margin = margin.min(v.abs());
            if v < 0.0 {
                sampled = true;
                break;
            }
        }
        if !sampled && margin < 1e-3 * r {
            continue;
        }
        assert_eq!(expected, sampled, "x = {x:?}, dir = {dir:?}");
        hits += expected as usize;
    }
    assert!(hits > 100);
}

#[test]
fn fan_oracle_agrees_on_every_face() {
    for (s, name) in SolidName::ALL.iter().enumerate() {
        let p = canonical_solid(*name);
        let mut rng = SplitMix64::new(100 + s as u64);
        for _ in 0..100 {
            let x = exterior_point(&mut rng, &p, 0.0, 5.0);
            for i in 0..p.faces().len() {
                let a = face_solid_angle(&p, i, &x).unwrap();
                let b = fan_face_solid_angle(&p, i, &x).unwrap();
                assert!((a - b).abs() <= 1e-10, "{name} face {i}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn monte_carlo_is_unbiased_on_cube_axis() {
    let p = canonical_solid(SolidName::Cube);
    let x = Point3::new(0.0, 0.0, 1.0);
    let exact = 2.0 * PI / 3.0;
    let within = (0..20)
        .filter(|&seed| {
            let est = mc_field(&p, &x, 100_000, seed).unwrap();
            (est.estimate - exact).abs() <= 4.0 * est.stderr
        })
        .count();
    assert!(within >= 19, "{within}/20");
}

#[test]
fn monte_carlo_does_not_depend_on_worker_count() {
    let p = canonical_solid(SolidName::Icosahedron);
    let x = Point3::new(1.1, 0.4, -0.3);
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = single.install(|| mc_field(&p, &x, 300_000, 9).unwrap());
    let b = many.install(|| mc_field(&p, &x, 300_000, 9).unwrap());
    assert_eq!(a, b);
}
