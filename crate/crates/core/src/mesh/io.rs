//! OBJ and ASCII PLY readers.
//!
//! Only geometry is read: texture coordinates, normals, materials, colors and
//! unknown records are skipped. Polygons with more than three corners are
//! fan-triangulated around their first corner.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::vec3::Vec3;
use super::{MeshError, TriangleMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    PlyAscii,
}

impl MeshFormat {
    /// Picks the format from a file extension (`obj` or `ply`).
    pub fn from_path(path: &Path) -> Result<Self, MeshError> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("obj") => Ok(MeshFormat::Obj),
            Some("ply") => Ok(MeshFormat::PlyAscii),
            _ => Err(MeshError::UnsupportedFormat(path.display().to_string())),
        }
    }
}

/// Reads a mesh file in the given format.
pub fn parse_mesh(path: &Path, format: MeshFormat) -> Result<TriangleMesh, MeshError> {
    let bytes = fs::read(path).map_err(|source| MeshError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let text = match String::from_utf8(bytes) {
        Ok(t) => t,
        Err(_) if format == MeshFormat::PlyAscii => {
            return Err(MeshError::UnsupportedFormat(
                "binary PLY (only ASCII PLY is supported)".into(),
            ))
        }
        Err(e) => {
            return Err(MeshError::Parse {
                line: 0,
                message: format!("file is not valid UTF-8: {e}"),
            })
        }
    };
    match format {
        MeshFormat::Obj => parse_obj_str(&text),
        MeshFormat::PlyAscii => parse_ply_str(&text),
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> MeshError {
    MeshError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64, MeshError> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("invalid number `{tok}`")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite coordinate `{tok}`")));
    }
    Ok(v)
}

fn fan(polygon: &[u32], out: &mut Vec<[u32; 3]>) {
    for i in 1..polygon.len() - 1 {
        out.push([polygon[0], polygon[i], polygon[i + 1]]);
    }
}

/// Parses Wavefront OBJ text. Face indices are 1-based; negative indices are
/// relative to the most recent vertex.
pub fn parse_obj_str(text: &str) -> Result<TriangleMesh, MeshError> {
    let mut vertices: Vec<Vec3> = Vec::new();
    let mut faces: Vec<[u32; 3]> = Vec::new();
    let mut face_lines: Vec<usize> = Vec::new();
    let mut polygon: Vec<u32> = Vec::with_capacity(8);

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = content.split_whitespace();
        match toks.next() {
            Some("v") => {
                let mut p = [0.0; 3];
                for c in &mut p {
                    let tok = toks
                        .next()
                        .ok_or_else(|| parse_err(line, "vertex needs 3 coordinates"))?;
                    *c = parse_f64(tok, line)?;
                }
                vertices.push(p);
            }
            Some("f") => {
                polygon.clear();
                for tok in toks {
                    let first = tok.split('/').next().unwrap_or("");
                    let idx: i64 = first
                        .parse()
                        .map_err(|_| parse_err(line, format!("invalid face index `{tok}`")))?;
                    let resolved = match idx {
                        0 => return Err(parse_err(line, "face index 0 (OBJ indices are 1-based)")),
                        i if i > 0 => i - 1,
                        i => vertices.len() as i64 + i,
                    };
                    if resolved < 0 || resolved > u32::MAX as i64 {
                        return Err(parse_err(line, format!("face index {idx} out of range")));
                    }
                    polygon.push(resolved as u32);
                }
                if polygon.len() < 3 {
                    return Err(parse_err(line, "face needs at least 3 vertices"));
                }
                let before = faces.len();
                fan(&polygon, &mut faces);
                face_lines.extend(std::iter::repeat_n(line, faces.len() - before));
            }
            _ => {}
        }
    }

    check_indices(&faces, &face_lines, vertices.len())?;
    TriangleMesh::new(vertices, faces)
}

fn check_indices(faces: &[[u32; 3]], lines: &[usize], n: usize) -> Result<(), MeshError> {
    for (f, &line) in faces.iter().zip(lines) {
        if let Some(&bad) = f.iter().find(|&&v| v as usize >= n) {
            return Err(parse_err(
                line,
                format!(
                    "face references vertex {} but only {n} vertices exist",
                    bad as usize + 1
                ),
            ));
        }
    }
    Ok(())
}

#[derive(Debug)]
enum PlyProperty {
    Scalar(String),
    List(String),
}

#[derive(Debug)]
struct PlyElement {
    name: String,
    count: usize,
    properties: Vec<PlyProperty>,
}

/// Parses ASCII PLY text. Reads `x`, `y`, `z` from the `vertex` element and
/// `vertex_indices` (or `vertex_index`) from the `face` element; every other
/// element and property is skipped.
pub fn parse_ply_str(text: &str) -> Result<TriangleMesh, MeshError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    match lines.next() {
        Some((_, l)) if l.trim() == "ply" => {}
        _ => return Err(parse_err(1, "missing `ply` magic")),
    }

    let mut elements: Vec<PlyElement> = Vec::new();
    let mut saw_format = false;
    loop {
        let (line, raw) = lines
            .next()
            .ok_or_else(|| parse_err(0, "unexpected end of file in header"))?;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.as_slice() {
            ["end_header"] => break,
            ["format", "ascii", _] => saw_format = true,
            ["format", other, ..] => {
                return Err(MeshError::UnsupportedFormat(format!(
                    "PLY format `{other}` (only ascii is supported)"
                )))
            }
            ["comment", ..] | ["obj_info", ..] | [] => {}
            ["element", name, count] => {
                let count = count
                    .parse()
                    .map_err(|_| parse_err(line, format!("invalid element count `{count}`")))?;
                elements.push(PlyElement {
                    name: name.to_string(),
                    count,
                    properties: Vec::new(),
                });
            }
            ["property", "list", _, _, name] => elements
                .last_mut()
                .ok_or_else(|| parse_err(line, "property before any element"))?
                .properties
                .push(PlyProperty::List(name.to_string())),
            ["property", _, name] => elements
                .last_mut()
                .ok_or_else(|| parse_err(line, "property before any element"))?
                .properties
                .push(PlyProperty::Scalar(name.to_string())),
            _ => return Err(parse_err(line, format!("unrecognized header line `{raw}`"))),
        }
    }
    if !saw_format {
        return Err(parse_err(1, "missing `format` line"));
    }

    let mut vertices: Vec<Vec3> = Vec::new();
    let mut faces: Vec<[u32; 3]> = Vec::new();
    let mut face_lines: Vec<usize> = Vec::new();
    let mut polygon: Vec<u32> = Vec::with_capacity(8);
    let mut data = lines.filter(|(_, l)| !l.trim().is_empty());

    for element in &elements {
        let is_vertex = element.name == "vertex";
        let is_face = element.name == "face";
        let xyz: Vec<Option<usize>> = ["x", "y", "z"]
            .iter()
            .map(|axis| {
                element
                    .properties
                    .iter()
                    .position(|p| matches!(p, PlyProperty::Scalar(n) if n == axis))
            })
            .collect();
        if is_vertex && xyz.iter().any(Option::is_none) {
            return Err(parse_err(0, "vertex element lacks x, y or z"));
        }
        let index_prop = element.properties.iter().position(
            |p| matches!(p, PlyProperty::List(n) if n == "vertex_indices" || n == "vertex_index"),
        );
        if is_face && index_prop.is_none() {
            return Err(parse_err(0, "face element lacks a vertex_indices list"));
        }

        for _ in 0..element.count {
            let (line, raw) = data.next().ok_or_else(|| {
                parse_err(
                    0,
                    format!("unexpected end of file in element `{}`", element.name),
                )
            })?;
            if !is_vertex && !is_face {
                continue;
            }
            let mut toks = raw.split_whitespace();
            let mut next = || {
                toks.next()
                    .ok_or_else(|| parse_err(line, "record has fewer values than declared"))
            };
            let mut p = [0.0; 3];
            for (pi, prop) in element.properties.iter().enumerate() {
                match prop {
                    PlyProperty::Scalar(_) => {
                        let tok = next()?;
                        if is_vertex {
                            if let Some(axis) = xyz.iter().position(|&a| a == Some(pi)) {
                                p[axis] = parse_f64(tok, line)?;
                            }
                        }
                    }
                    PlyProperty::List(_) => {
                        let tok = next()?;
                        let len: usize = tok
                            .parse()
                            .map_err(|_| parse_err(line, format!("invalid list length `{tok}`")))?;
                        let take = is_face && Some(pi) == index_prop;
                        if take {
                            polygon.clear();
                        }
                        for _ in 0..len {
                            let tok = next()?;
                            if take {
                                let idx: u32 = tok.parse().map_err(|_| {
                                    parse_err(line, format!("invalid vertex index `{tok}`"))
                                })?;
                                polygon.push(idx);
                            }
                        }
                        if take {
                            if polygon.len() < 3 {
                                return Err(parse_err(line, "face needs at least 3 vertices"));
                            }
                            let before = faces.len();
                            fan(&polygon, &mut faces);
                            face_lines.extend(std::iter::repeat_n(line, faces.len() - before));
                        }
                    }
                }
            }
            if is_vertex {
                vertices.push(p);
            }
        }
    }

    for (f, &line) in faces.iter().zip(&face_lines) {
        if let Some(&bad) = f.iter().find(|&&v| v as usize >= vertices.len()) {
            return Err(parse_err(
                line,
                format!(
                    "face references vertex {bad} but only {} vertices exist",
                    vertices.len()
                ),
            ));
        }
    }
    TriangleMesh::new(vertices, faces)
}

/// Serializes the mesh as OBJ. Coordinates use the shortest representation
/// that parses back to the same `f64`.
pub fn write_obj(mesh: &TriangleMesh) -> String {
    let mut out = String::with_capacity(mesh.vertex_count() * 32 + mesh.face_count() * 16);
    for p in mesh.vertices() {
        let _ = writeln!(out, "v {:?} {:?} {:?}", p[0], p[1], p[2]);
    }
    for f in mesh.faces() {
        let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    out
}
