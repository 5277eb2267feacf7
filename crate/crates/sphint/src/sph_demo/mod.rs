//! Minimal 2D incompressible SPH whose rigid walls are triangle meshes coupled through exact
//! kernel integrals.
//!
//! Gradients `G_iT` below are `∇_{x_i} ∫_T W(x_i − x′) dx′`, which point from a particle into
//! the wall.

mod neighbors;
mod scene;
mod solver;

use serde::Deserialize;
use thiserror::Error;

use crate::geometry::{Point2, Triangle};
use crate::mesh_io::{MeshError, TriangleMesh};
use crate::triangle_integrator::IntegrationError;

pub use neighbors::{distance_to_triangle, Contact, Neighborhood, PairTerm};
pub use scene::{
    builtin_mesh, builtin_params, kinetic_energy, run_scene, seed_fluid, Scene, SceneConfig, SceneParams, RunSummary,
    SCENE_NAMES,
};
pub use solver::{PressureSolve, SphSolver, StepReport};

#[derive(Debug, Error)]
pub enum SphError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{mode:?} pressure solve diverged at iteration {iteration} (residual {residual:e})")]
    Diverged {
        mode: SolverMode,
        iteration: usize,
        residual: f64,
    },
    #[error("time step {dt:e} violates the CFL bound for speed {max_speed:e} after 4 halvings")]
    Cfl { dt: f64, max_speed: f64 },
    #[error("unknown scene `{0}`")]
    UnknownScene(String),
    #[error("parameter file: {0}")]
    Params(#[from] toml::de::Error),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    pub position: Point2<f64>,
    pub velocity: [f64; 2],
    pub mass: f64,
    pub density: f64,
    pub pressure: f64,
}

impl Particle {
    pub fn at_rest(position: Point2<f64>, mass: f64) -> Self {
        Self {
            position,
            velocity: [0.0; 2],
            mass,
            density: 0.0,
            pressure: 0.0,
        }
    }
}

/// Static wall made of triangles filled with material of density `rest_density`.
#[derive(Debug, Clone)]
pub struct BoundaryObject {
    pub mesh: TriangleMesh,
    pub rest_density: f64,
    triangles: Vec<Triangle<f64>>,
    /// `[xmin, ymin, xmax, ymax]` per triangle
    bounds: Vec<[f64; 4]>,
}

impl BoundaryObject {
    pub fn new(mesh: TriangleMesh, rest_density: f64) -> Result<Self, SphError> {
        if !(rest_density > 0.0) {
            return Err(SphError::InvalidParameter(format!(
                "boundary rest density must be positive, got {rest_density}"
            )));
        }
        let triangles: Vec<_> = (0..mesh.len()).map(|i| mesh.triangle(i, None)).collect();
        let bounds = triangles
            .iter()
            .map(|t| {
                let xs = t.v.map(|p| p.x);
                let ys = t.v.map(|p| p.y);
                [
                    xs.iter().copied().fold(f64::INFINITY, f64::min),
                    ys.iter().copied().fold(f64::INFINITY, f64::min),
                    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    ys.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                ]
            })
            .collect();
        Ok(Self {
            mesh,
            rest_density,
            triangles,
            bounds,
        })
    }

    pub fn triangles(&self) -> &[Triangle<f64>] {
        &self.triangles
    }

    /// Indices of triangles whose bounding box meets the disc of radius `r` around `p`.
    pub fn candidates(&self, p: Point2<f64>, r: f64) -> impl Iterator<Item = usize> + '_ {
        self.bounds.iter().enumerate().filter_map(move |(i, b)| {
            let dx = (b[0] - p.x).max(p.x - b[2]).max(0.0);
            let dy = (b[1] - p.y).max(p.y - b[3]).max(0.0);
            (dx * dx + dy * dy < r * r).then_some(i)
        })
    }

    /// Whether `p` lies in (or on) any boundary triangle.
    pub fn contains(&self, p: Point2<f64>) -> bool {
        self.candidates(p, f64::MIN_POSITIVE.sqrt())
            .any(|i| crate::geometry::point_in_triangle(p, &self.triangles[i]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMode {
    DivergenceFree,
    Incompressible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryModel {
    /// Pressure known at the mesh vertices and interpolated linearly.
    VertexLinear,
    /// One wall pressure per (particle, triangle) pair, taken at the contact point.
    #[default]
    ContactPoint,
}

/// Pressure the wall carries in the contact-point coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WallPressure {
    /// `p(x′) = p_i`
    #[default]
    Mirrored,
    /// `p(x′) = 0`: only the particle's own `p_i/ρ_i²` acts, which keeps the projection
    /// symmetric.
    Zero,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphParams {
    /// Initial lattice spacing (m).
    pub spacing: f64,
    /// Kernel support radius `h` (m).
    pub support_radius: f64,
    pub rest_density: f64,
    pub boundary_rest_density: f64,
    /// Kinematic viscosity (m²/s).
    pub viscosity: f64,
    pub gravity: [f64; 2],
    pub dt: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// Mean relative compression accepted by the incompressibility solve.
    pub density_tolerance: f64,
    /// Mean relative density change per step accepted by the divergence solve.
    pub divergence_tolerance: f64,
    pub max_iterations: usize,
    #[serde(default = "default_relaxation")]
    pub relaxation: f64,
    #[serde(default)]
    pub wall_pressure: WallPressure,
}

fn default_cfl() -> f64 {
    0.4
}

fn default_relaxation() -> f64 {
    0.5
}

impl SphParams {
    pub fn validate(&self) -> Result<(), SphError> {
        let positive = [
            ("spacing", self.spacing),
            ("support_radius", self.support_radius),
            ("rest_density", self.rest_density),
            ("boundary_rest_density", self.boundary_rest_density),
            ("dt", self.dt),
            ("cfl", self.cfl),
            ("density_tolerance", self.density_tolerance),
            ("divergence_tolerance", self.divergence_tolerance),
            ("relaxation", self.relaxation),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SphError::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.viscosity >= 0.0) {
            return Err(SphError::InvalidParameter(format!(
                "viscosity must be non-negative, got {}",
                self.viscosity
            )));
        }
        if self.max_iterations == 0 {
            return Err(SphError::InvalidParameter("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}
