//! `isoptic`: generate solids, evaluate the solid-angle field, extract isoptic
//! surfaces and run the oracle checks.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 query point on an edge line.

mod alpha;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isoptic::geometry::{build_polyhedron, canonical_solid, Point3, Polyhedron, SolidName};
use isoptic::isosurface::{
    bounding_radius, extract_isoptic, isoptic_grid_spec, mesh_residual, DEFAULT_RESOLUTION,
};
use isoptic::mesh_io::{parse_off, write_obj, write_off, write_stl};
use isoptic::oracles::MIN_SAMPLES;
use isoptic::solid_angle::{isoptic_field, FieldMode, SolidAngleError};

#[derive(Parser)]
#[command(
    name = "isoptic",
    version,
    about = "Solid-angle fields and isoptic surfaces of convex polyhedra"
)]
struct Cli {
    /// Worker threads for parallel sections (0 = all cores).
    #[arg(long, global = true, env = "ISOPTIC_WORKERS", default_value_t = 0)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a canonical solid as OFF.
    Solid {
        name: SolidName,
        /// Output path; OFF goes to stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the field at one point.
    Field {
        #[command(flatten)]
        source: Source,
        /// Query point as X,Y,Z.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        at: Point3,
        #[arg(long, default_value = "visible")]
        mode: FieldMode,
    },
    /// Extract the isoptic surface for one angle and write OBJ or STL.
    Isoptic {
        #[command(flatten)]
        source: Source,
        /// Solid angle in steradians, e.g. pi/8, 2pi/3 or 1.25.
        #[arg(long, value_parser = alpha::parse_alpha)]
        alpha: f64,
        /// Lattice nodes per axis.
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        res: usize,
        /// Output path ending in .obj or .stl.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Cross-check the field against independent oracles.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Canonical solid name.
    #[arg(long)]
    solid: Option<SolidName>,
    /// OFF file with the polyhedron.
    #[arg(long)]
    input: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Verification,
    Singular(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification => 1,
            Failure::Usage(_) => 2,
            Failure::Singular(_) => 3,
        }
    }
}

fn parse_point(text: &str) -> Result<Point3, String> {
    let coords: Vec<f64> = text
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("bad coordinate in `{text}`: {e}"))?;
    match coords[..] {
        [x, y, z] if coords.iter().all(|c| c.is_finite()) => Ok(Point3::new(x, y, z)),
        _ => Err(format!("expected three finite numbers X,Y,Z, got `{text}`")),
    }
}

fn load(source: &Source) -> Result<(String, Polyhedron), Failure> {
    if let Some(name) = source.solid {
        return Ok((name.to_string(), canonical_solid(name)));
    }
    let path = source.input.as_deref().expect("clap enforces one source");
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let doc = parse_off(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let p = build_polyhedron(&doc.vertices, &doc.faces)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok((path.display().to_string(), p))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn cmd_solid(name: SolidName, out: Option<PathBuf>) -> Result<(), Failure> {
    let p = canonical_solid(name);
    let off = write_off(p.vertices(), &p.cycles()).map_err(|e| Failure::Usage(e.to_string()))?;
    match out {
        Some(path) => {
            write_file(&path, off.as_bytes())?;
            println!("solid: {name}");
            println!("vertices: {}", p.vertices().len());
            println!("faces: {}", p.faces().len());
            println!("circumradius: {:.12}", p.circumradius());
            println!("wrote: {}", path.display());
        }
        None => print!("{off}"),
    }
    Ok(())
}

fn cmd_field(source: &Source, at: Point3, mode: FieldMode) -> Result<(), Failure> {
    let (_, p) = load(source)?;
    let value = isoptic_field(&p, &at, mode).map_err(|e| match e {
        SolidAngleError::SingularRay { .. } | SolidAngleError::OnFace { .. } => {
            Failure::Singular(e.to_string())
        }
    })?;
    println!("{}, omega = {:.12}", value.containment, value.omega);
    let faces: Vec<String> = value.visible_faces.iter().map(|i| i.to_string()).collect();
    println!(
        "visible faces: {}",
        if faces.is_empty() {
            "none".to_string()
        } else {
            faces.join(" ")
        }
    );
    Ok(())
}

fn cmd_isoptic(source: &Source, alpha: f64, res: usize, out: &Path) -> Result<(), Failure> {
    let extension = out
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    if !matches!(extension.as_deref(), Some("obj" | "stl")) {
        return Err(Failure::Usage(format!(
            "output {} must end in .obj or .stl",
            out.display()
        )));
    }
    let (label, p) = load(source)?;
    let usage = |e: isoptic::isosurface::IsoError| Failure::Usage(e.to_string());
    let d = bounding_radius(&p, alpha).map_err(usage)?;
    let spec = isoptic_grid_spec(&p, alpha, res).map_err(usage)?;
    let mesh = extract_isoptic(&p, alpha, res).map_err(usage)?;
    let residual = mesh_residual(&p, alpha, &mesh);

    let bytes = match extension.as_deref() {
        Some("stl") => write_stl(&mesh),
        _ => write_obj(&mesh).into_bytes(),
    };
    write_file(out, &bytes)?;

    println!("solid: {label}");
    println!("alpha: {alpha:.12}");
    println!("bounding radius: {d:.12}");
    println!("grid: {} x {} x {}", spec.res[0], spec.res[1], spec.res[2]);
    println!("vertices: {}", mesh.vertices.len());
    println!("triangles: {}", mesh.triangles.len());
    println!("residual max: {:.6e}", residual.max_abs);
    println!("residual rms: {:.6e}", residual.rms);
    if residual.skipped > 0 {
        println!("residual skipped: {}", residual.skipped);
    }
    println!("wrote: {} ({} bytes)", out.display(), bytes.len());
    Ok(())
}

fn cmd_verify(source: &Source, samples: u64, seed: u64) -> Result<(), Failure> {
    if samples < MIN_SAMPLES {
        return Err(Failure::Usage(format!(
            "--samples {samples} is below the minimum of {MIN_SAMPLES}"
        )));
    }
    let (label, p) = load(source)?;
    println!("solid: {label}");
    println!("samples: {samples}");
    println!("seed: {seed}");
    let checks = verify::run(&p, samples, seed);
    for check in &checks {
        println!(
            "{} {}: {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.summary
        );
    }
    if checks.iter().all(|c| c.passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot start worker pool: {e}")))?;

    match cli.command {
        Command::Solid { name, out } => cmd_solid(name, out),
        Command::Field { source, at, mode } => cmd_field(&source, at, mode),
        Command::Isoptic {
            source,
            alpha,
            res,
            out,
        } => cmd_isoptic(&source, alpha, res, &out),
        Command::Verify {
            source,
            samples,
            seed,
        } => cmd_verify(&source, samples, seed),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) | Failure::Singular(msg) => eprintln!("error: {msg}"),
                Failure::Verification => eprintln!("error: verification failed"),
            }
            ExitCode::from(failure.code())
        }
    }
}
