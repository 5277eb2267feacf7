use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TriangleMesh;
use crate::geometry::Point2;

/// Channel name the generators write the field into.
pub const FIELD_CHANNEL: &str = "f";
/// Grid giving 8 triangles.
pub const GRID_NT8: (usize, usize) = (2, 2);
/// Grid giving 96 triangles.
pub const GRID_NT96: (usize, usize) = (8, 6);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldSpec {
    Constant(f64),
    /// `a x + b y + c`
    Linear { a: f64, b: f64, c: f64 },
}

impl FieldSpec {
    pub fn eval(&self, p: Point2<f64>) -> f64 {
        match *self {
            FieldSpec::Constant(c) => c,
            FieldSpec::Linear { a, b, c } => a * p.x + b * p.y + c,
        }
    }

    /// Gradient of the field.
    pub fn gradient(&self) -> [f64; 2] {
        match *self {
            FieldSpec::Constant(_) => [0.0; 2],
            FieldSpec::Linear { a, b, .. } => [a, b],
        }
    }
}

fn grid(nx: usize, ny: usize, jitter: impl FnMut(usize, usize) -> (f64, f64), field: FieldSpec) -> TriangleMesh {
    assert!(nx >= 1 && ny >= 1, "grid needs at least one cell per direction");
    let mut jitter = jitter;
    let (dx, dy) = (2.0 / nx as f64, 2.0 / ny as f64);
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            let mut p = Point2::new(-1.0 + dx * i as f64, -1.0 + dy * j as f64);
            // exact boundary coordinates keep the tiling exact
            if i == nx {
                p.x = 1.0;
            }
            if j == ny {
                p.y = 1.0;
            }
            if i > 0 && i < nx && j > 0 && j < ny {
                let (ox, oy) = jitter(i, j);
                p = p + Point2::new(ox * dx, oy * dy);
            }
            vertices.push(p);
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            // alternating diagonals: a union-jack pattern around even grid points
            if (i + j) % 2 == 0 {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            } else {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            }
        }
    }
    let values = vertices.iter().map(|&p| field.eval(p)).collect();
    TriangleMesh::new(vertices, triangles)
        .and_then(|m| m.with_vertex_channel(FIELD_CHANNEL, values))
        .expect("generated mesh is valid")
}

/// Structured triangulation of `[−1, 1]²` with `2·nx·ny` triangles and the field in channel
/// [`FIELD_CHANNEL`].
pub fn generate_square_triangulation(nx: usize, ny: usize, field: FieldSpec) -> TriangleMesh {
    grid(nx, ny, |_, _| (0.0, 0.0), field)
}

/// Like [`generate_square_triangulation`] with interior vertices moved by up to
/// `amplitude` cell widths (seeded, `amplitude < 0.25` keeps every triangle valid).
pub fn perturbed_square_triangulation(
    nx: usize,
    ny: usize,
    field: FieldSpec,
    amplitude: f64,
    seed: u64,
) -> TriangleMesh {
    assert!((0.0..0.25).contains(&amplitude), "amplitude must lie in [0, 0.25)");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    grid(
        nx,
        ny,
        |_, _| {
            (
                rng.gen_range(-amplitude..=amplitude),
                rng.gen_range(-amplitude..=amplitude),
            )
        },
        field,
    )
}
