//! OFF and OBJ ingestion, OFF output.

use std::fmt::Write as _;
use std::path::Path;

use super::TriMesh;
use crate::error::{Error, Result};
use crate::geom::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    Obj,
}

impl MeshFormat {
    /// Guess from the file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "off" => Some(MeshFormat::Off),
            "obj" => Some(MeshFormat::Obj),
            _ => None,
        }
    }
}

/// Load and validate a mesh. `format` falls back to the file extension.
pub fn read_mesh(path: impl AsRef<Path>, format: Option<MeshFormat>) -> Result<TriMesh> {
    let path = path.as_ref();
    let format = format.or_else(|| MeshFormat::from_path(path)).ok_or_else(|| {
        Error::InvalidParameter(format!("cannot infer mesh format of {}", path.display()))
    })?;
    let text = std::fs::read_to_string(path)?;
    match format {
        MeshFormat::Off => parse_off(&text),
        MeshFormat::Obj => parse_obj(&text),
    }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| Error::Parse { line, msg: format!("expected a number, got {tok:?}") })
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::Parse { line, msg: format!("expected an index, got {tok:?}") })
}

pub fn parse_off(text: &str) -> Result<TriMesh> {
    // (line number, tokens) with comments and blank lines removed
    let mut lines = text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then(|| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
    });

    let (ln, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
    let counts = match header.as_slice() {
        ["OFF"] => {
            let (ln, c) = lines
                .next()
                .ok_or(Error::Parse { line: ln + 1, msg: "missing counts line".into() })?;
            (ln, c)
        }
        ["OFF", rest @ ..] => (ln, rest.to_vec()),
        _ => return Err(Error::Parse { line: ln, msg: "missing OFF header".into() }),
    };
    let (ln, counts) = counts;
    if counts.len() < 2 {
        return Err(Error::Parse { line: ln, msg: "counts line must be `V F E`".into() });
    }
    let nv = parse_usize(counts[0], ln)?;
    let nf = parse_usize(counts[1], ln)?;

    let mut positions = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, toks) = lines
            .next()
            .ok_or(Error::Parse { line: ln, msg: "unexpected end of vertex list".into() })?;
        if toks.len() < 3 {
            return Err(Error::Parse { line: ln, msg: "vertex line needs x y z".into() });
        }
        positions.push(Vec3::new(
            parse_f64(toks[0], ln)?,
            parse_f64(toks[1], ln)?,
            parse_f64(toks[2], ln)?,
        ));
    }
    let mut triangles = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (ln, toks) = lines
            .next()
            .ok_or(Error::Parse { line: ln, msg: "unexpected end of face list".into() })?;
        let arity = parse_usize(toks[0], ln)?;
        if arity != 3 {
            return Err(Error::NonTriangularFace { line: ln, arity });
        }
        if toks.len() < 4 {
            return Err(Error::Parse { line: ln, msg: "face line needs 3 indices".into() });
        }
        triangles.push([
            parse_usize(toks[1], ln)?,
            parse_usize(toks[2], ln)?,
            parse_usize(toks[3], ln)?,
        ]);
    }
    TriMesh::new(positions, triangles)
}

pub fn parse_obj(text: &str) -> Result<TriMesh> {
    let mut positions = Vec::new();
    let mut raw_faces: Vec<(usize, Vec<i64>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let line = line.split('#').next().unwrap_or("");
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("v") => {
                let c: Vec<&str> = toks.collect();
                if c.len() < 3 {
                    return Err(Error::Parse { line: ln, msg: "vertex needs x y z".into() });
                }
                positions.push(Vec3::new(
                    parse_f64(c[0], ln)?,
                    parse_f64(c[1], ln)?,
                    parse_f64(c[2], ln)?,
                ));
            }
            Some("f") => {
                let idx = toks
                    .map(|t| {
                        let first = t.split('/').next().unwrap_or("");
                        first.parse::<i64>().map_err(|_| Error::Parse {
                            line: ln,
                            msg: format!("bad face index {t:?}"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if idx.len() != 3 {
                    return Err(Error::NonTriangularFace { line: ln, arity: idx.len() });
                }
                raw_faces.push((ln, idx));
            }
            _ => {}
        }
    }
    let n = positions.len() as i64;
    let mut triangles = Vec::with_capacity(raw_faces.len());
    for (ln, idx) in raw_faces {
        let mut t = [0usize; 3];
        for (slot, &i) in t.iter_mut().zip(&idx) {
            // 1-based, negative counts back from the most recent vertex
            let z = if i > 0 { i - 1 } else { n + i };
            if i == 0 || z < 0 || z >= n {
                return Err(Error::Parse { line: ln, msg: format!("face index {i} out of range") });
            }
            *slot = z as usize;
        }
        triangles.push(t);
    }
    TriMesh::new(positions, triangles)
}

/// OFF text with coordinates at 17 significant digits (bit-exact round trip).
pub fn write_off(mesh: &TriMesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "OFF");
    let _ = writeln!(s, "{} {} {}", mesh.vertex_count(), mesh.face_count(), mesh.edge_count());
    for p in mesh.positions() {
        let _ = writeln!(s, "{:.16e} {:.16e} {:.16e}", p.x, p.y, p.z);
    }
    for t in mesh.triangles() {
        let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
    }
    s
}
