//! Demo scenes: V-bottomed cups with a resting or falling block of fluid.

use std::collections::BTreeMap;

use serde::Deserialize;

use super::neighbors::distance_to_triangle;
use super::solver::{SphSolver, StepReport};
use super::{BoundaryObject, Particle, SphError, SphParams};
use crate::geometry::Point2;
use crate::mesh_io::{parse_mesh, TriangleMesh};

pub const SCENE_NAMES: [&str; 6] = [
    "acute_drop",
    "acute_nodrop",
    "ortho_drop",
    "ortho_nodrop",
    "obtuse_drop",
    "obtuse_nodrop",
];

const PARAMS: &str = include_str!("../../scenes/params.toml");
const MESHES: [&str; 6] = [
    include_str!("../../scenes/acute_drop.mesh"),
    include_str!("../../scenes/acute_nodrop.mesh"),
    include_str!("../../scenes/ortho_drop.mesh"),
    include_str!("../../scenes/ortho_nodrop.mesh"),
    include_str!("../../scenes/obtuse_drop.mesh"),
    include_str!("../../scenes/obtuse_nodrop.mesh"),
];

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    /// Mesh file, relative to the parameter file.
    pub mesh: String,
    /// Fluid block `[xmin, xmax, ymin, ymax]` filled on the lattice.
    pub fluid: [f64; 4],
    /// Steps between snapshots written by drivers.
    #[serde(default = "default_cadence")]
    pub snapshot_every: usize,
}

fn default_cadence() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneParams {
    pub solver: SphParams,
    pub scenes: BTreeMap<String, SceneConfig>,
}

impl SceneParams {
    pub fn parse(text: &str) -> Result<Self, SphError> {
        let p: Self = toml::from_str(text)?;
        p.solver.validate()?;
        Ok(p)
    }

    pub fn scene(&self, name: &str) -> Result<&SceneConfig, SphError> {
        self.scenes.get(name).ok_or_else(|| SphError::UnknownScene(name.into()))
    }
}

/// Parameters shipped with the crate.
pub fn builtin_params() -> SceneParams {
    SceneParams::parse(PARAMS).expect("bundled parameter file is valid")
}

/// Wall mesh of one of the bundled scenes.
pub fn builtin_mesh(name: &str) -> Result<TriangleMesh, SphError> {
    let i = SCENE_NAMES
        .iter()
        .position(|&n| n == name)
        .ok_or_else(|| SphError::UnknownScene(name.into()))?;
    Ok(parse_mesh(MESHES[i])?)
}

#[derive(Debug, Clone)]
pub struct Scene {
    pub name: String,
    pub boundary: BoundaryObject,
    pub particles: Vec<Particle>,
}

impl Scene {
    pub fn new(name: &str, mesh: TriangleMesh, config: &SceneConfig, solver: &SphSolver) -> Result<Self, SphError> {
        let boundary = BoundaryObject::new(mesh, solver.params.boundary_rest_density)?;
        let mut particles = seed_fluid(config.fluid, &boundary, solver);
        let density = solver.density(&particles, &boundary)?;
        for (p, r) in particles.iter_mut().zip(density) {
            p.density = r;
        }
        Ok(Self {
            name: name.into(),
            boundary,
            particles,
        })
    }

    pub fn builtin(name: &str, solver: &SphSolver) -> Result<Self, SphError> {
        let params = builtin_params();
        Self::new(name, builtin_mesh(name)?, params.scene(name)?, solver)
    }
}

/// Lattice points of the block that lie above some wall triangle and at least one spacing
/// away from every one. Closer points would start compressed by the wall volume; the first
/// condition keeps the fill inside open-topped containers.
pub fn seed_fluid(block: [f64; 4], boundary: &BoundaryObject, solver: &SphSolver) -> Vec<Particle> {
    let dx = solver.params.spacing;
    let mass = solver.lattice_mass();
    let [x0, x1, y0, y1] = block;
    let nx = ((x1 - x0) / dx).floor().max(0.0) as usize;
    let ny = ((y1 - y0) / dx).floor().max(0.0) as usize;
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let p = Point2::new(x0 + (i as f64 + 0.5) * dx, y0 + (j as f64 + 0.5) * dx);
            let clear = boundary
                .candidates(p, dx)
                .all(|k| distance_to_triangle(p, &boundary.triangles()[k]).0 >= dx);
            if clear && above_wall(p, boundary) {
                out.push(Particle::at_rest(p, mass));
            }
        }
    }
    out
}

/// Whether the downward vertical ray from `p` meets a boundary triangle.
fn above_wall(p: Point2<f64>, boundary: &BoundaryObject) -> bool {
    boundary.triangles().iter().any(|t| {
        let mut lowest = f64::INFINITY;
        for e in 0..3 {
            let (a, b) = (t.v[e], t.v[(e + 1) % 3]);
            let (lo, hi) = if a.x <= b.x { (a, b) } else { (b, a) };
            if p.x < lo.x || p.x > hi.x {
                continue;
            }
            let y = if hi.x > lo.x {
                lo.y + (p.x - lo.x) / (hi.x - lo.x) * (hi.y - lo.y)
            } else {
                lo.y.min(hi.y)
            };
            lowest = lowest.min(y);
        }
        lowest < p.y
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub steps: usize,
    pub particles: usize,
    pub time: f64,
    pub penetrations: usize,
    /// Largest mean compression left by any incompressibility solve.
    pub max_density_error: f64,
    /// Mean relative compression of the densities at the final positions.
    pub final_density_error: f64,
    pub max_impulse_imbalance: f64,
    pub kinetic_energy: Vec<f64>,
    pub max_iterations: usize,
}

impl RunSummary {
    /// Mean kinetic energy over the last eighth of the run divided by the mean over the
    /// eighth before it; below one when the final quarter is still losing energy.
    pub fn settling_ratio(&self) -> Option<f64> {
        let n = self.kinetic_energy.len() / 8;
        if n == 0 {
            return None;
        }
        let k = &self.kinetic_energy[self.kinetic_energy.len() - 2 * n..];
        let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
        Some(mean(&k[n..]) / mean(&k[..n]))
    }
}

pub fn kinetic_energy(particles: &[Particle]) -> f64 {
    particles
        .iter()
        .map(|p| 0.5 * p.mass * (p.velocity[0].powi(2) + p.velocity[1].powi(2)))
        .sum()
}

/// Runs `steps` steps of the configured size. `observe` sees the state after every step.
pub fn run_scene(
    scene: &mut Scene,
    solver: &SphSolver,
    steps: usize,
    mut observe: impl FnMut(usize, &[Particle], &StepReport) -> Result<(), SphError>,
) -> Result<RunSummary, SphError> {
    let mut s = RunSummary {
        steps: 0,
        particles: scene.particles.len(),
        time: 0.0,
        penetrations: 0,
        max_density_error: 0.0,
        final_density_error: 0.0,
        max_impulse_imbalance: 0.0,
        kinetic_energy: Vec::with_capacity(steps),
        max_iterations: 0,
    };
    for k in 0..steps {
        let r = solver.step(&mut scene.particles, &scene.boundary, solver.params.dt)?;
        s.steps += 1;
        s.time += r.dt;
        s.penetrations += r.penetrations;
        s.max_density_error = s.max_density_error.max(r.density.1);
        s.max_impulse_imbalance = s.max_impulse_imbalance.max(r.impulse_imbalance);
        s.max_iterations = s.max_iterations.max(r.density.0).max(r.divergence.0);
        s.kinetic_energy.push(kinetic_energy(&scene.particles));
        observe(k + 1, &scene.particles, &r)?;
    }
    let rho = solver.density(&scene.particles, &scene.boundary)?;
    let rho0 = solver.params.rest_density;
    if !rho.is_empty() {
        s.final_density_error = rho.iter().map(|r| (r - rho0).max(0.0)).sum::<f64>() / (rho.len() as f64 * rho0);
    }
    Ok(s)
}
