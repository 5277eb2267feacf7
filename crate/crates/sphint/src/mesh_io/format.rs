use std::fmt::Write as _;
use std::path::Path;

use super::{MeshError, TriangleMesh};
use crate::geometry::Point2;

const MAGIC: &str = "sphint-mesh";
const VERSION: u32 = 1;

/// Shortest form that still carries 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_mesh(mesh: &TriangleMesh) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC} {VERSION}");
    let _ = writeln!(out, "vertices {}", mesh.vertices.len());
    for p in &mesh.vertices {
        let _ = writeln!(out, "{} {}", num(p.x), num(p.y));
    }
    let _ = writeln!(out, "triangles {}", mesh.triangles.len());
    for t in &mesh.triangles {
        let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
    }
    for (kind, map) in [
        ("vertex_channel", &mesh.vertex_channels),
        ("triangle_channel", &mesh.triangle_channels),
    ] {
        for (name, values) in map {
            let _ = writeln!(out, "{kind} {name}");
            for v in values {
                let _ = writeln!(out, "{}", num(*v));
            }
        }
    }
    out.push_str("end\n");
    out
}

pub fn save_mesh(mesh: &TriangleMesh, path: impl AsRef<Path>) -> Result<(), MeshError> {
    std::fs::write(path, write_mesh(mesh))?;
    Ok(())
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<TriangleMesh, MeshError> {
    parse_mesh(&std::fs::read_to_string(path)?)
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Self {
            inner: it.peekable(),
            last: 0,
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), MeshError> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l.split_whitespace().collect()))
            }
            None => Err(MeshError::Parse {
                line: self.last + 1,
                message: format!("unexpected end of file, expected {what}"),
            }),
        }
    }
}

fn err(line: usize, message: impl Into<String>) -> MeshError {
    MeshError::Parse {
        line,
        message: message.into(),
    }
}

fn header<'a>(lines: &mut Lines<'a>, key: &str) -> Result<usize, MeshError> {
    let (n, f) = lines.next(key)?;
    match f.as_slice() {
        [k, count] if *k == key => count
            .parse()
            .map_err(|_| err(n, format!("bad {key} count `{count}`"))),
        _ => Err(err(n, format!("expected `{key} <count>`"))),
    }
}

fn float(line: usize, s: &str) -> Result<f64, MeshError> {
    let v: f64 = s.parse().map_err(|_| err(line, format!("bad number `{s}`")))?;
    if !v.is_finite() {
        return Err(err(line, format!("non-finite number `{s}`")));
    }
    Ok(v)
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

pub fn parse_mesh(text: &str) -> Result<TriangleMesh, MeshError> {
    let mut lines = Lines::new(text);
    let (n, f) = lines.next("header")?;
    match f.as_slice() {
        [m, v] if *m == MAGIC => {
            if *v != VERSION.to_string() {
                return Err(err(n, format!("unsupported version `{v}`")));
            }
        }
        _ => return Err(err(n, format!("expected `{MAGIC} {VERSION}`"))),
    }
    let nv = header(&mut lines, "vertices")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, f) = lines.next("vertex")?;
        let [x, y] = f.as_slice() else {
            return Err(err(n, "vertex needs two coordinates"));
        };
        vertices.push(Point2::new(float(n, x)?, float(n, y)?));
    }
    let nt = header(&mut lines, "triangles")?;
    let mut triangles = Vec::with_capacity(nt);
    for t in 0..nt {
        let (n, f) = lines.next("triangle")?;
        let [a, b, c] = f.as_slice() else {
            return Err(err(n, "triangle needs three vertex indices"));
        };
        let idx = |s: &str| -> Result<usize, MeshError> {
            let i: usize = s.parse().map_err(|_| err(n, format!("bad index `{s}`")))?;
            if i >= nv {
                return Err(err(
                    n,
                    MeshError::IndexOutOfRange {
                        triangle: t,
                        index: i,
                        count: nv,
                    }
                    .to_string(),
                ));
            }
            Ok(i)
        };
        triangles.push([idx(a)?, idx(b)?, idx(c)?]);
    }
    let mut mesh = TriangleMesh::new(vertices, triangles)?;
    loop {
        let (n, f) = lines.next("channel or `end`")?;
        match f.as_slice() {
            ["end"] => break,
            [kind @ ("vertex_channel" | "triangle_channel"), name] => {
                if !valid_name(name) {
                    return Err(err(n, format!("invalid channel name `{name}`")));
                }
                let vertex = *kind == "vertex_channel";
                let count = if vertex { nv } else { nt };
                let mut values = Vec::with_capacity(count);
                for _ in 0..count {
                    let (n, f) = lines.next("channel value")?;
                    let [v] = f.as_slice() else {
                        return Err(err(n, "channel entry needs one number"));
                    };
                    values.push(float(n, v)?);
                }
                mesh.insert_channel(name, values, vertex)
                    .map_err(|e| err(n, e.to_string()))?;
            }
            _ => return Err(err(n, "expected `vertex_channel <name>`, `triangle_channel <name>` or `end`")),
        }
    }
    if let Some((n, _)) = lines.inner.next() {
        return Err(err(n, "content after `end`"));
    }
    Ok(mesh)
}
