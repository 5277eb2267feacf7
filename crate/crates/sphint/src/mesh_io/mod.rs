//! Triangle meshes with named per-vertex and per-triangle field channels.
//!
//! The on-disk format is described in `docs/mesh_format.md`.

mod format;
mod generate;

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::geometry::{Point2, Triangle};

pub use format::{load_mesh, parse_mesh, save_mesh, write_mesh};
pub use generate::{
    generate_square_triangulation, perturbed_square_triangulation, FieldSpec, GRID_NT8, GRID_NT96,
    FIELD_CHANNEL,
};

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("triangle {triangle} references vertex {index}, mesh has {count}")]
    IndexOutOfRange {
        triangle: usize,
        index: usize,
        count: usize,
    },
    #[error("triangle {0} repeats an earlier triangle")]
    DuplicateTriangle(usize),
    #[error("no channel named `{0}`")]
    MissingChannel(String),
    #[error("channel `{name}` has {got} entries, expected {want}")]
    ChannelLength { name: String, got: usize, want: usize },
    #[error("channel `{0}` is defined twice")]
    DuplicateChannel(String),
}

/// A channel's values and where they live.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldRef<'a> {
    Vertex(&'a [f64]),
    Triangle(&'a [f64]),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriangleMesh {
    pub vertices: Vec<Point2<f64>>,
    pub triangles: Vec<[usize; 3]>,
    pub vertex_channels: BTreeMap<String, Vec<f64>>,
    pub triangle_channels: BTreeMap<String, Vec<f64>>,
}

impl TriangleMesh {
    pub fn new(vertices: Vec<Point2<f64>>, triangles: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        let mesh = Self {
            vertices,
            triangles,
            ..Self::default()
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn with_vertex_channel(mut self, name: &str, values: Vec<f64>) -> Result<Self, MeshError> {
        self.insert_channel(name, values, true)?;
        Ok(self)
    }

    pub fn with_triangle_channel(mut self, name: &str, values: Vec<f64>) -> Result<Self, MeshError> {
        self.insert_channel(name, values, false)?;
        Ok(self)
    }

    fn insert_channel(&mut self, name: &str, values: Vec<f64>, vertex: bool) -> Result<(), MeshError> {
        if self.vertex_channels.contains_key(name) || self.triangle_channels.contains_key(name) {
            return Err(MeshError::DuplicateChannel(name.to_string()));
        }
        let want = if vertex {
            self.vertices.len()
        } else {
            self.triangles.len()
        };
        if values.len() != want {
            return Err(MeshError::ChannelLength {
                name: name.to_string(),
                got: values.len(),
                want,
            });
        }
        let target = if vertex {
            &mut self.vertex_channels
        } else {
            &mut self.triangle_channels
        };
        target.insert(name.to_string(), values);
        Ok(())
    }

    /// Index ranges, duplicate triangles and channel lengths.
    pub fn validate(&self) -> Result<(), MeshError> {
        let count = self.vertices.len();
        let mut seen = HashSet::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            if let Some(&index) = tri.iter().find(|&&i| i >= count) {
                return Err(MeshError::IndexOutOfRange {
                    triangle: t,
                    index,
                    count,
                });
            }
            let mut key = *tri;
            key.sort_unstable();
            if !seen.insert(key) {
                return Err(MeshError::DuplicateTriangle(t));
            }
        }
        let check = |map: &BTreeMap<String, Vec<f64>>, want: usize| {
            map.iter().try_for_each(|(name, v)| {
                if v.len() == want {
                    Ok(())
                } else {
                    Err(MeshError::ChannelLength {
                        name: name.clone(),
                        got: v.len(),
                        want,
                    })
                }
            })
        };
        check(&self.vertex_channels, count)?;
        check(&self.triangle_channels, self.triangles.len())
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn channel(&self, name: &str) -> Result<FieldRef<'_>, MeshError> {
        if let Some(v) = self.vertex_channels.get(name) {
            return Ok(FieldRef::Vertex(v));
        }
        if let Some(v) = self.triangle_channels.get(name) {
            return Ok(FieldRef::Triangle(v));
        }
        Err(MeshError::MissingChannel(name.to_string()))
    }

    /// Triangle `i` carrying the values of `field` (none: constant one).
    pub fn triangle(&self, i: usize, field: Option<FieldRef<'_>>) -> Triangle<f64> {
        let [a, b, c] = self.triangles[i];
        let t = Triangle::new(self.vertices[a], self.vertices[b], self.vertices[c]);
        match field {
            None => t,
            Some(FieldRef::Vertex(v)) => t.with_values([v[a], v[b], v[c]]),
            Some(FieldRef::Triangle(v)) => t.with_values([v[i]; 3]),
        }
    }

    /// All triangles carrying channel `name` (none: constant one).
    pub fn field_triangles(&self, name: Option<&str>) -> Result<Vec<Triangle<f64>>, MeshError> {
        let field = name.map(|n| self.channel(n)).transpose()?;
        Ok((0..self.len()).map(|i| self.triangle(i, field)).collect())
    }

    pub fn area(&self) -> f64 {
        (0..self.len())
            .map(|i| self.triangle(i, None).signed_area().abs())
            .sum()
    }
}
