//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use isoptic::geometry::{build_polyhedron, canonical_solid, Containment, Point3, SolidName};
use isoptic::isosurface::{bounding_radius, extract_isoptic, mesh_residual};
use isoptic::mesh_io::{parse_off, write_obj, write_off, write_stl};
use isoptic::oracles::{fan_face_solid_angle, mc_field, SplitMix64};
use isoptic::solid_angle::{face_solid_angle, isoptic_field, FieldMode};
use isoptic::FULL_SPHERE;

use common::{
    exterior_point, interior_point, min_edge_line_distance, rotate_about, rotation_group,
};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn field(p: &isoptic::Polyhedron, x: &Point3, mode: FieldMode) -> f64 {
    isoptic_field(p, x, mode).expect("field evaluation").omega
}

fn octant_exactness() -> Outcome {
    let v = vec![
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(0.0, 1.0, 0.0),
        Point3::new(0.0, 0.0, 1.0),
        Point3::new(1.0, 1.0, 1.0),
    ];
    let cycles = vec![vec![0, 1, 2], vec![0, 1, 3], vec![1, 2, 3], vec![2, 0, 3]];
    let p = build_polyhedron(&v, &cycles).unwrap();
    let omega = face_solid_angle(&p, 0, &Point3::origin()).unwrap();
    let err = (omega - PI / 2.0).abs();
    outcome(err <= 1e-12, format!("|omega - pi/2| = {err:.2e}"))
}

fn interior_closure() -> Outcome {
    let mut worst = 0.0f64;
    for (s, name) in SolidName::ALL.iter().enumerate() {
        let p = canonical_solid(*name);
        let mut rng = SplitMix64::new(1000 + s as u64);
        for _ in 0..100 {
            let x = interior_point(&mut rng, &p);
            let total: f64 = (0..p.faces().len())
                .map(|i| face_solid_angle(&p, i, &x).unwrap())
                .sum();
            worst = worst.max((total - FULL_SPHERE).abs());
        }
    }
    outcome(
        worst <= 1e-8,
        format!("max |sum - 4pi| = {worst:.2e} over 700 points"),
    )
}

fn mode_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for (s, name) in SolidName::ALL.iter().enumerate() {
        let p = canonical_solid(*name);
        let mut rng = SplitMix64::new(2000 + s as u64);
        for _ in 0..1000 {
            let x = exterior_point(&mut rng, &p, 0.0, 5.0);
            let a = field(&p, &x, FieldMode::VisibleSum);
            let b = field(&p, &x, FieldMode::HalfSum);
            worst = worst.max((a - b).abs());
        }
    }
    outcome(
        worst <= 1e-9,
        format!("max |visible - half| = {worst:.2e} over 7000 points"),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut compared = 0usize;
    for (s, name) in SolidName::ALL.iter().enumerate() {
        let p = canonical_solid(*name);
        let mut rng = SplitMix64::new(3000 + s as u64);
        for _ in 0..100 {
            let x = exterior_point(&mut rng, &p, 0.0, 5.0);
            for i in 0..p.faces().len() {
                let a = face_solid_angle(&p, i, &x).unwrap();
                let b = fan_face_solid_angle(&p, i, &x).unwrap();
                worst = worst.max((a - b).abs());
                compared += 1;
            }
        }
    }
    outcome(
        worst <= 1e-10,
        format!("max deviation = {worst:.2e} over {compared} face evaluations"),
    )
}

fn monte_carlo_concordance() -> Outcome {
    let mut lines = Vec::new();
    let mut all_ok = true;
    for (s, name) in [SolidName::Cube, SolidName::Tetrahedron].iter().enumerate() {
        let p = canonical_solid(*name);
        let mut rng = SplitMix64::new(4000 + s as u64);
        let mut within = 0;
        for k in 0..20 {
            let x = exterior_point(&mut rng, &p, 1.2, 4.0);
            let f = field(&p, &x, FieldMode::VisibleSum);
            let mc = mc_field(&p, &x, 1_000_000, 77 + k).unwrap();
            if (f - mc.estimate).abs() <= 4.0 * mc.stderr {
                within += 1;
            }
        }
        all_ok &= within >= 19;
        lines.push(format!("{name}: {within}/20 within 4 sigma"));
    }
    outcome(all_ok, lines.join(", "))
}

fn closed_form_spot() -> Outcome {
    let p = canonical_solid(SolidName::Cube);
    let omega = field(&p, &Point3::new(0.0, 0.0, 1.0), FieldMode::VisibleSum);
    let err = (omega - 2.0 * PI / 3.0).abs();
    outcome(err <= 1e-12, format!("|omega - 2pi/3| = {err:.2e}"))
}

fn reference_surfaces() -> Outcome {
    let cases = [
        (SolidName::Tetrahedron, PI / 8.0, "pi/8"),
        (SolidName::Cube, PI / 2.0, "pi/2"),
        (SolidName::Octahedron, PI / 7.0, "pi/7"),
        (SolidName::TruncatedCube, PI, "pi"),
        (SolidName::TruncatedOctahedron, 2.0 * PI / 3.0, "2pi/3"),
    ];
    let mut all_ok = true;
    let mut lines = Vec::new();
    for (s, (name, alpha, label)) in cases.iter().enumerate() {
        let p = canonical_solid(*name);
        let mesh = match extract_isoptic(&p, *alpha, 96) {
            Ok(m) => m,
            Err(e) => {
                all_ok = false;
                lines.push(format!("{name} {label}: {e}"));
                continue;
            }
        };
        let topo = mesh.topology();
        let res = mesh_residual(&p, *alpha, &mesh);

        let group = rotation_group(&p);
        let d = bounding_radius(&p, *alpha).unwrap();
        let mut rng = SplitMix64::new(7000 + s as u64);
        let mut sym = 0.0f64;
        for _ in 0..1000 {
            let x = exterior_point(&mut rng, &p, 0.0, 1.05 * d / p.circumradius());
            let fx = field(&p, &x, FieldMode::VisibleSum);
            for g in &group {
                let gx = rotate_about(&p.centroid(), g, &x);
                sym = sym.max((field(&p, &gx, FieldMode::VisibleSum) - fx).abs());
            }
        }
        let ok = topo.is_sphere() && res.max_abs <= 0.05 && sym <= 1e-9;
        all_ok &= ok;
        lines.push(format!(
            "{name} {label}: chi={} watertight={} residual={:.4} |G|={} sym={:.1e}",
            topo.euler_characteristic(),
            topo.is_watertight(),
            res.max_abs,
            group.len(),
            sym
        ));
    }
    outcome(all_ok, lines.join("; "))
}

fn residual_convergence() -> Outcome {
    let p = canonical_solid(SolidName::Cube);
    let alpha = PI / 2.0;
    let coarse = mesh_residual(&p, alpha, &extract_isoptic(&p, alpha, 96).unwrap()).max_abs;
    let fine = mesh_residual(&p, alpha, &extract_isoptic(&p, alpha, 192).unwrap()).max_abs;
    let ratio = coarse / fine;
    outcome(
        ratio >= 1.7,
        format!("res 96: {coarse:.4e}, res 192: {fine:.4e}, ratio {ratio:.2}"),
    )
}

fn continuity() -> Outcome {
    let mut rng = SplitMix64::new(9000);
    let solids = SolidName::ALL;
    let mut worst = 0.0f64;
    let mut segments = 0;
    while segments < 100 {
        let p = canonical_solid(solids[segments % solids.len()]);
        let r = p.circumradius();
        let fi = (rng.next_u64() % p.faces().len() as u64) as usize;
        let face = &p.faces()[fi];
        let n = face.normal;

        // A point on the face plane, outside the face polygon and away from edge lines.
        let fc = p
            .face_vertices(fi)
            .fold(nalgebra::Vector3::zeros(), |acc, v| acc + v.coords)
            / face.cycle.len() as f64;
        let t = rng.next_direction();
        let t = (t - n * n.dot(&t)).normalize();
        let y = Point3::from(fc + t * (r * (1.2 + 1.8 * rng.next_f64())));
        if p.halfspaces().max_violation(&y) < 0.05 * r || min_edge_line_distance(&p, &y) < 0.05 * r
        {
            continue;
        }
        let u = rng.next_direction();
        let dir = (n + (u - n * n.dot(&u)) * 0.8).normalize();

        let mut prev: Option<f64> = None;
        for k in -100..=100 {
            let x = y + dir * (k as f64 * 1e-4);
            assert_eq!(p.contains_point(&x), Containment::Outside);
            let f = field(&p, &x, FieldMode::VisibleSum);
            if let Some(q) = prev {
                worst = worst.max((f - q).abs());
            }
            prev = Some(f);
        }
        segments += 1;
    }
    outcome(
        worst <= 1e-3,
        format!("max step change = {worst:.2e} over 100 segments"),
    )
}

fn io_contracts() -> Outcome {
    let mut problems = Vec::new();
    for name in SolidName::ALL {
        let p = canonical_solid(name);
        let text = write_off(p.vertices(), &p.cycles()).unwrap();
        let doc = parse_off(&text).unwrap();
        if doc.vertices != p.vertices() || doc.faces != p.cycles() {
            problems.push(format!("{name}: OFF round trip differs"));
        }
        match build_polyhedron(&doc.vertices, &doc.faces) {
            Ok(q) if q == p => {}
            _ => problems.push(format!("{name}: rebuilt polyhedron differs")),
        }
    }

    let p = canonical_solid(SolidName::Cube);
    let a = extract_isoptic(&p, PI / 2.0, 24).unwrap();
    let b = extract_isoptic(&p, PI / 2.0, 24).unwrap();
    let stl = write_stl(&a);
    if stl.len() != 84 + 50 * a.triangles.len() {
        problems.push(format!(
            "STL is {} bytes for {} triangles",
            stl.len(),
            a.triangles.len()
        ));
    }
    if stl != write_stl(&b) || write_obj(&a) != write_obj(&b) {
        problems.push("repeated extraction is not byte-identical".into());
    }
    let detail = if problems.is_empty() {
        format!(
            "7 OFF round trips exact, STL {} bytes, repeat runs identical",
            stl.len()
        )
    } else {
        problems.join("; ")
    };
    outcome(problems.is_empty(), detail)
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (
            1,
            "octant exactness",
            Duration::from_millis(1),
            octant_exactness,
        ),
        (
            2,
            "interior closure",
            Duration::from_secs(5),
            interior_closure,
        ),
        (
            3,
            "visible-sum / half-sum equivalence",
            Duration::from_secs(10),
            mode_equivalence,
        ),
        (
            4,
            "fan oracle equivalence",
            Duration::from_secs(10),
            oracle_equivalence,
        ),
        (
            5,
            "Monte Carlo concordance",
            Duration::from_secs(60),
            monte_carlo_concordance,
        ),
        (
            6,
            "closed-form spot value",
            Duration::from_millis(1),
            closed_form_spot,
        ),
        (
            7,
            "reference surfaces",
            Duration::from_secs(300),
            reference_surfaces,
        ),
        (
            8,
            "residual convergence",
            Duration::from_secs(180),
            residual_convergence,
        ),
        (
            9,
            "continuity across indicator switches",
            Duration::from_secs(5),
            continuity,
        ),
        (10, "I/O contracts", Duration::from_secs(1), io_contracts),
    ];

    let mut failed = 0;
    for (id, title, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= budget;
        let ok = result.ok && in_budget;
        if !ok {
            failed += 1;
        }
        println!(
            "[{}] {id:>2}. {title}: {} ({:.3} s, budget {:.3} s{})",
            if ok { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64(),
            budget.as_secs_f64(),
            if in_budget { "" } else { ", over budget" },
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
