//! OFF input/output, OBJ and binary STL output.
//!
//! Text formats write reals as `{:.16e}` (17 significant digits), which
//! round-trips every `f64` exactly. Output lines end in LF; input may use LF
//! or CRLF.

use std::fmt::Write as _;

use nalgebra::Vector3;
use thiserror::Error;

use crate::geometry::Point3;
use crate::mesh::TriangleMesh;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshIoError {
    #[error("line {line}: {message}")]
    SyntaxError { line: usize, message: String },
    #[error("line {line}: vertex index {index} out of range ({count} vertices)")]
    IndexOutOfRange {
        line: usize,
        index: usize,
        count: usize,
    },
    #[error("count mismatch: {0}")]
    CountMismatch(String),
    #[error("refusing to write empty geometry")]
    EmptyGeometry,
}

/// Parsed contents of an OFF file.
#[derive(Debug, Clone, PartialEq)]
pub struct OffDocument {
    pub vertices: Vec<Point3>,
    pub faces: Vec<Vec<usize>>,
    /// Edge count as declared in the header (often 0).
    pub edge_count: usize,
}

/// Non-empty, comment-stripped lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, MeshIoError> {
    tok.parse().map_err(|_| MeshIoError::SyntaxError {
        line,
        message: format!("expected {what}, found `{tok}`"),
    })
}

pub fn parse_off(text: &str) -> Result<OffDocument, MeshIoError> {
    let mut lines = content_lines(text);

    let (header_line, header) = lines.next().ok_or(MeshIoError::SyntaxError {
        line: 1,
        message: "missing OFF header".into(),
    })?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("OFF") {
        return Err(MeshIoError::SyntaxError {
            line: header_line,
            message: "first line must be `OFF`".into(),
        });
    }
    // counts may follow the header on the same line
    let rest: Vec<&str> = tokens.collect();
    let (count_line, counts) = if rest.is_empty() {
        let (n, l) = lines
            .next()
            .ok_or_else(|| MeshIoError::CountMismatch("missing `V F E` counts line".into()))?;
        (n, l.split_whitespace().collect::<Vec<_>>())
    } else {
        (header_line, rest)
    };
    if counts.len() != 3 {
        return Err(MeshIoError::SyntaxError {
            line: count_line,
            message: format!("expected `V F E`, found {} values", counts.len()),
        });
    }
    let nv: usize = parse_num(counts[0], count_line, "vertex count")?;
    let nf: usize = parse_num(counts[1], count_line, "face count")?;
    let ne: usize = parse_num(counts[2], count_line, "edge count")?;
    if nv == 0 || nf == 0 {
        return Err(MeshIoError::CountMismatch(format!(
            "{nv} vertices and {nf} faces declared; geometry is empty"
        )));
    }

    let mut vertices = Vec::with_capacity(nv);
    for k in 0..nv {
        let (ln, l) = lines.next().ok_or_else(|| {
            MeshIoError::CountMismatch(format!("expected {nv} vertices, found {k}"))
        })?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(MeshIoError::SyntaxError {
                line: ln,
                message: format!("vertex needs 3 coordinates, found {}", toks.len()),
            });
        }
        let c: Vec<f64> = toks
            .iter()
            .map(|t| parse_num(t, ln, "a real number"))
            .collect::<Result<_, _>>()?;
        if c.iter().any(|v| !v.is_finite()) {
            return Err(MeshIoError::SyntaxError {
                line: ln,
                message: "non-finite coordinate".into(),
            });
        }
        vertices.push(Point3::new(c[0], c[1], c[2]));
    }

    let mut faces = Vec::with_capacity(nf);
    for k in 0..nf {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| MeshIoError::CountMismatch(format!("expected {nf} faces, found {k}")))?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        let n: usize = parse_num(toks[0], ln, "face vertex count")?;
        if n < 3 {
            return Err(MeshIoError::SyntaxError {
                line: ln,
                message: format!("face needs at least 3 vertices, found {n}"),
            });
        }
        if toks.len() != n + 1 {
            return Err(MeshIoError::SyntaxError {
                line: ln,
                message: format!("face declares {n} indices but lists {}", toks.len() - 1),
            });
        }
        let mut cycle = Vec::with_capacity(n);
        for t in &toks[1..] {
            let index: usize = parse_num(t, ln, "a vertex index")?;
            if index >= nv {
                return Err(MeshIoError::IndexOutOfRange {
                    line: ln,
                    index,
                    count: nv,
                });
            }
            cycle.push(index);
        }
        faces.push(cycle);
    }

    if let Some((ln, _)) = lines.next() {
        return Err(MeshIoError::CountMismatch(format!(
            "unexpected data after {nf} faces at line {ln}"
        )));
    }

    Ok(OffDocument {
        vertices,
        faces,
        edge_count: ne,
    })
}

fn push_reals(out: &mut String, vals: &[f64]) {
    for (k, v) in vals.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v:.16e}");
    }
}

pub fn write_off(vertices: &[Point3], cycles: &[Vec<usize>]) -> Result<String, MeshIoError> {
    if vertices.is_empty() || cycles.is_empty() {
        return Err(MeshIoError::EmptyGeometry);
    }
    let mut out = String::new();
    let _ = writeln!(out, "OFF\n{} {} 0", vertices.len(), cycles.len());
    for v in vertices {
        push_reals(&mut out, &[v.x, v.y, v.z]);
        out.push('\n');
    }
    for c in cycles {
        let _ = write!(out, "{}", c.len());
        for i in c {
            let _ = write!(out, " {i}");
        }
        out.push('\n');
    }
    Ok(out)
}

/// Wavefront OBJ with 1-based indices; `f a//a b//b c//c` when normals are present.
pub fn write_obj(mesh: &TriangleMesh) -> String {
    let with_normals = !mesh.normals.is_empty() && mesh.normals.len() == mesh.vertices.len();
    let mut out = String::new();
    for v in &mesh.vertices {
        out.push_str("v ");
        push_reals(&mut out, &[v.x, v.y, v.z]);
        out.push('\n');
    }
    if with_normals {
        for n in &mesh.normals {
            out.push_str("vn ");
            push_reals(&mut out, &[n.x, n.y, n.z]);
            out.push('\n');
        }
    }
    for &[a, b, c] in &mesh.triangles {
        let (a, b, c) = (a + 1, b + 1, c + 1);
        if with_normals {
            let _ = writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}");
        } else {
            let _ = writeln!(out, "f {a} {b} {c}");
        }
    }
    out
}

pub const STL_HEADER_TAG: &[u8] = b"isoptic";

/// Binary STL: 80-byte header, `u32` triangle count, then per triangle the
/// facet normal and three vertices as little-endian `f32` plus a zero `u16`.
pub fn write_stl(mesh: &TriangleMesh) -> Vec<u8> {
    let mut out = Vec::with_capacity(84 + 50 * mesh.triangles.len());
    let mut header = [0u8; 80];
    header[..STL_HEADER_TAG.len()].copy_from_slice(STL_HEADER_TAG);
    out.extend_from_slice(&header);
    out.extend_from_slice(&(mesh.triangles.len() as u32).to_le_bytes());
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let n: Vector3<f64> = mesh.triangle_normal(t);
        for c in n.iter() {
            out.extend_from_slice(&(*c as f32).to_le_bytes());
        }
        for &v in tri {
            for c in mesh.vertices[v].coords.iter() {
                out.extend_from_slice(&(*c as f32).to_le_bytes());
            }
        }
        out.extend_from_slice(&0u16.to_le_bytes());
    }
    out
}
