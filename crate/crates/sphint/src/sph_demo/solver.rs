//! Density, relaxed-Jacobi pressure projection, viscosity and the time step.

use rayon::prelude::*;

use super::neighbors::Neighborhood;
use super::{BoundaryModel, BoundaryObject, Particle, SolverMode, SphError, SphParams, WallPressure};
use crate::geometry::Point2;
use crate::kernels::PolyKernel;
use crate::triangle_integrator::TriangleIntegrator;

/// Consecutive residual increases that count as divergence.
const DIVERGENCE_RUN: usize = 10;
/// A growing run only counts once the residual exceeds this multiple of its best value.
const DIVERGENCE_FACTOR: f64 = 2.0;
const MIN_ITERATIONS: usize = 2;
const MAX_HALVINGS: usize = 4;
/// Magnitude below which the boundary normal is undefined.
const NORMAL_EPS: f64 = 1e-12;

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn axpy(acc: &mut [f64; 2], s: f64, v: [f64; 2]) {
    acc[0] += s * v[0];
    acc[1] += s * v[1];
}

#[derive(Debug, Clone, PartialEq)]
pub struct PressureSolve {
    pub pressures: Vec<f64>,
    /// Pressure accelerations for the final pressures.
    pub accelerations: Vec<[f64; 2]>,
    pub iterations: usize,
    /// Mean remaining relative compression.
    pub residual: f64,
    /// `|Σ_i m_i a_i^pp| / max_i |m_i a_i^pp|` over the particle–particle part.
    pub impulse_imbalance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub dt: f64,
    pub divergence: (usize, f64),
    pub density: (usize, f64),
    pub impulse_imbalance: f64,
    pub penetrations: usize,
}

#[derive(Debug, Clone)]
pub struct SphSolver {
    pub params: SphParams,
    kernel: PolyKernel<f64>,
    integrator: TriangleIntegrator<f64>,
}

impl SphSolver {
    pub fn new(params: SphParams) -> Result<Self, SphError> {
        params.validate()?;
        Ok(Self {
            kernel: PolyKernel::wendland4().with_support(params.support_radius),
            integrator: TriangleIntegrator::wendland4(),
            params,
        })
    }

    pub fn h(&self) -> f64 {
        self.params.support_radius
    }

    pub fn kernel(&self) -> &PolyKernel<f64> {
        &self.kernel
    }

    pub fn integrator(&self) -> &TriangleIntegrator<f64> {
        &self.integrator
    }

    pub fn neighborhood(&self, particles: &[Particle], boundary: &BoundaryObject) -> Result<Neighborhood, SphError> {
        Neighborhood::build(particles, boundary, &self.kernel, &self.integrator)
    }

    /// Particle mass that gives `rest_density` on an infinite square lattice.
    pub fn lattice_mass(&self) -> f64 {
        let (dx, h) = (self.params.spacing, self.h());
        let n = (h / dx).ceil() as i64;
        let mut s = 0.0;
        for i in -n..=n {
            for j in -n..=n {
                s += self.kernel.value(dx * ((i * i + j * j) as f64).sqrt());
            }
        }
        self.params.rest_density / s
    }

    /// `ρ_i = Σ_j m_j W_ij + ρ0b Σ_T ∫_T W`, including the self contribution.
    pub fn density(&self, particles: &[Particle], boundary: &BoundaryObject) -> Result<Vec<f64>, SphError> {
        let nb = self.neighborhood(particles, boundary)?;
        Ok(self.density_with(&nb, particles, boundary))
    }

    pub fn density_with(&self, nb: &Neighborhood, particles: &[Particle], boundary: &BoundaryObject) -> Vec<f64> {
        let w0 = self.kernel.value(0.0);
        (0..particles.len())
            .into_par_iter()
            .map(|i| {
                let own = particles[i].mass * w0;
                let fluid: f64 = nb.pairs[i].iter().map(|t| particles[t.j].mass * t.w).sum();
                own + fluid + boundary.rest_density * nb.boundary_volume(i)
            })
            .collect()
    }

    /// `dρ_i/dt = Σ_j m_j (v_i − v_j)·∇W_ij + ρ0b v_i·G_i` for the given velocities.
    fn density_rate(&self, nb: &Neighborhood, particles: &[Particle], v: &[[f64; 2]], rho_b: f64) -> Vec<f64> {
        (0..particles.len())
            .into_par_iter()
            .map(|i| {
                let mut s = rho_b * dot(v[i], nb.boundary_gradient(i));
                for t in &nb.pairs[i] {
                    let vij = [v[i][0] - v[t.j][0], v[i][1] - v[t.j][1]];
                    s += particles[t.j].mass * dot(vij, t.grad);
                }
                s
            })
            .collect()
    }

    /// `f/p_i` for the wall term: `1/ρ0b + ρ0b/ρ_i²` when the wall mirrors `p_i`,
    /// `ρ0b/ρ_i²` when it carries no pressure of its own.
    fn gamma(&self, rho_b: f64, rho_i: f64) -> f64 {
        let fluid = rho_b / (rho_i * rho_i);
        match self.params.wall_pressure {
            WallPressure::Mirrored => 1.0 / rho_b + fluid,
            WallPressure::Zero => fluid,
        }
    }

    /// Pressure accelerations, split into particle–particle and boundary parts.
    fn pressure_accelerations(
        &self,
        nb: &Neighborhood,
        particles: &[Particle],
        p: &[f64],
        rho_b: f64,
    ) -> Vec<([f64; 2], [f64; 2])> {
        (0..particles.len())
            .into_par_iter()
            .map(|i| {
                let ri = particles[i].density;
                let pi = p[i] / (ri * ri);
                let mut pp = [0.0; 2];
                for t in &nb.pairs[i] {
                    let rj = particles[t.j].density;
                    let s = particles[t.j].mass * (pi + p[t.j] / (rj * rj));
                    axpy(&mut pp, -s, t.grad);
                }
                let mut b = [0.0; 2];
                axpy(&mut b, -p[i] * self.gamma(rho_b, ri), nb.boundary_gradient(i));
                (pp, b)
            })
            .collect()
    }

    /// Relaxed Jacobi for the pressures that make the predicted density change equal `source`.
    fn solve(
        &self,
        nb: &Neighborhood,
        particles: &[Particle],
        boundary: &BoundaryObject,
        dt: f64,
        mode: SolverMode,
        source: &[f64],
    ) -> Result<PressureSolve, SphError> {
        let n = particles.len();
        let rho_b = boundary.rest_density;
        let rho0 = self.params.rest_density;
        let tol = match mode {
            SolverMode::DivergenceFree => self.params.divergence_tolerance,
            SolverMode::Incompressible => self.params.density_tolerance,
        };
        let dt2 = dt * dt;
        let diag: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let ri = particles[i].density;
                let inv = 1.0 / (ri * ri);
                let g = nb.boundary_gradient(i);
                let mut d = [0.0; 2];
                for t in &nb.pairs[i] {
                    axpy(&mut d, -particles[t.j].mass * inv, t.grad);
                }
                axpy(&mut d, -self.gamma(rho_b, ri), g);
                let mi = particles[i].mass * inv;
                let mut a = rho_b * dot(d, g);
                for t in &nb.pairs[i] {
                    let dji = [mi * t.grad[0], mi * t.grad[1]];
                    a += particles[t.j].mass * dot([d[0] - dji[0], d[1] - dji[1]], t.grad);
                }
                dt2 * a
            })
            .collect();

        // Starting from the previous step's pressures lets the compression-only residual
        // accept pressures that overshoot, which pumps energy into resting fluid.
        let mut p = vec![0.0; n];
        let mut last = f64::INFINITY;
        let mut best = f64::INFINITY;
        let mut growing = 0;
        let mut iterations = 0;
        loop {
            let acc = self.pressure_accelerations(nb, particles, &p, rho_b);
            let total: Vec<[f64; 2]> = acc.iter().map(|(a, b)| [a[0] + b[0], a[1] + b[1]]).collect();
            let ap: Vec<f64> = (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut s = rho_b * dot(total[i], nb.boundary_gradient(i));
                    for t in &nb.pairs[i] {
                        let d = [total[i][0] - total[t.j][0], total[i][1] - total[t.j][1]];
                        s += particles[t.j].mass * dot(d, t.grad);
                    }
                    dt2 * s
                })
                .collect();
            let residual = if n == 0 {
                0.0
            } else {
                ap.iter().zip(source).map(|(a, s)| (a - s).max(0.0)).sum::<f64>() / (n as f64 * rho0)
            };
            let done = (residual <= tol && iterations >= MIN_ITERATIONS) || iterations >= self.params.max_iterations;
            if done {
                let impulse_imbalance = impulse_imbalance(particles, &acc);
                return Ok(PressureSolve {
                    pressures: p,
                    accelerations: total,
                    iterations,
                    residual,
                    impulse_imbalance,
                });
            }
            best = best.min(residual);
            if residual > last {
                growing += 1;
                if growing >= DIVERGENCE_RUN && residual > DIVERGENCE_FACTOR * best {
                    return Err(SphError::Diverged {
                        mode,
                        iteration: iterations,
                        residual,
                    });
                }
            } else {
                growing = 0;
            }
            last = residual;
            let omega = self.params.relaxation;
            p.par_iter_mut().enumerate().for_each(|(i, pi)| {
                *pi = if diag[i] < 0.0 {
                    (*pi + omega * (source[i] - ap[i]) / diag[i]).max(0.0)
                } else {
                    0.0
                };
            });
            iterations += 1;
        }
    }

    /// Pressures for one projection. Uses the stored densities and velocities of `particles`;
    /// the incompressible mode targets the rest density after moving with those velocities.
    pub fn pressure_solve(
        &self,
        particles: &[Particle],
        boundary: &BoundaryObject,
        dt: f64,
        mode: SolverMode,
    ) -> Result<PressureSolve, SphError> {
        if !(dt > 0.0) {
            return Err(SphError::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        let nb = self.neighborhood(particles, boundary)?;
        let v: Vec<_> = particles.iter().map(|p| p.velocity).collect();
        let source = self.source(&nb, particles, &v, boundary.rest_density, dt, mode);
        self.solve(&nb, particles, boundary, dt, mode, &source)
    }

    fn source(
        &self,
        nb: &Neighborhood,
        particles: &[Particle],
        v: &[[f64; 2]],
        rho_b: f64,
        dt: f64,
        mode: SolverMode,
    ) -> Vec<f64> {
        let rate = self.density_rate(nb, particles, v, rho_b);
        let rho0 = self.params.rest_density;
        particles
            .iter()
            .zip(rate)
            .map(|(p, r)| match mode {
                SolverMode::DivergenceFree => -dt * r,
                SolverMode::Incompressible => rho0 - p.density - dt * r,
            })
            .collect()
    }

    /// Unit wall normal pointing from the boundary towards the particle, or zero when no
    /// boundary is within reach.
    pub fn boundary_normal(&self, particle: &Particle, boundary: &BoundaryObject) -> Result<[f64; 2], SphError> {
        let mut g = [0.0; 2];
        for k in boundary.candidates(particle.position, self.h()) {
            let r = self
                .integrator
                .integrate_triangle(particle.position, self.h(), &boundary.triangles()[k])?;
            axpy(&mut g, 1.0, r.gradient);
        }
        Ok(normal_from_gradient(g))
    }

    /// Acceleration on one particle from the wall pressure
    /// `f(x′) = ρ0b (p(x′)/ρ0b² + p_i/ρ_i²)`.
    ///
    /// `contact_point` takes `p(x′)` from the `wall_pressure` setting (`p_i` when mirrored) and
    /// `f` constant per triangle; `vertex_linear` needs one pressure per mesh vertex and
    /// interpolates `f` linearly.
    pub fn boundary_pressure_acceleration(
        &self,
        particle: &Particle,
        boundary: &BoundaryObject,
        vertex_pressures: Option<&[f64]>,
        model: BoundaryModel,
    ) -> Result<[f64; 2], SphError> {
        let rho_b = boundary.rest_density;
        let h = self.h();
        let mut a = [0.0; 2];
        match model {
            BoundaryModel::ContactPoint => {
                let f = particle.pressure * self.gamma(rho_b, particle.density);
                for k in boundary.candidates(particle.position, h) {
                    let r = self.integrator.integrate_triangle(particle.position, h, &boundary.triangles()[k])?;
                    axpy(&mut a, -f, r.gradient);
                }
            }
            BoundaryModel::VertexLinear => {
                let v = vertex_pressures
                    .filter(|v| v.len() == boundary.mesh.vertices.len())
                    .ok_or_else(|| {
                        SphError::InvalidParameter("vertex_linear needs one pressure per boundary vertex".into())
                    })?;
                let own = particle.pressure / (particle.density * particle.density);
                for k in boundary.candidates(particle.position, h) {
                    let f = boundary.mesh.triangles[k].map(|i| rho_b * (v[i] / (rho_b * rho_b) + own));
                    let t = boundary.triangles()[k].with_values(f);
                    let r = self.integrator.integrate_triangle(particle.position, h, &t)?;
                    axpy(&mut a, -1.0, r.gradient);
                }
            }
        }
        Ok(a)
    }

    /// Kernel-weighted average of particle pressures at each boundary vertex, zero where no
    /// particle is in reach.
    pub fn vertex_pressures(&self, particles: &[Particle], boundary: &BoundaryObject) -> Vec<f64> {
        boundary
            .mesh
            .vertices
            .par_iter()
            .map(|&v| {
                let (mut num, mut den) = (0.0, 0.0);
                for p in particles {
                    let w = self.kernel.value((p.position - v).norm());
                    num += w * p.pressure;
                    den += w;
                }
                if den > 0.0 {
                    num / den
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// Regularized Laplacian viscosity. The wall term keeps only its tangential part.
    pub fn viscosity(&self, particles: &[Particle], boundary: &BoundaryObject, nu: f64) -> Result<Vec<[f64; 2]>, SphError> {
        let nb = self.neighborhood(particles, boundary)?;
        let v: Vec<_> = particles.iter().map(|p| p.velocity).collect();
        Ok(self.viscosity_with(&nb, particles, &v, nu))
    }

    fn viscosity_with(&self, nb: &Neighborhood, particles: &[Particle], v: &[[f64; 2]], nu: f64) -> Vec<[f64; 2]> {
        // 2(d + 2) with d = 2
        let c = 8.0 * nu;
        let eps = 0.01 * self.h() * self.h();
        (0..particles.len())
            .into_par_iter()
            .map(|i| {
                let mut a = [0.0; 2];
                for t in &nb.pairs[i] {
                    let pj = &particles[t.j];
                    let vij = [v[i][0] - v[t.j][0], v[i][1] - v[t.j][1]];
                    let s = pj.mass / pj.density * dot(vij, t.offset) / (dot(t.offset, t.offset) + eps);
                    axpy(&mut a, c * s, t.grad);
                }
                let mut b = [0.0; 2];
                // the wall is at rest; v_i·(x_i − x′) is linear over the triangle and integrated
                // exactly, the distance in the denominator is taken at the weighted centroid
                for k in &nb.contacts[i] {
                    let s = c / (dot(k.offset, k.offset) + eps);
                    axpy(&mut b, s * v[i][0], k.moment_gradient[0]);
                    axpy(&mut b, s * v[i][1], k.moment_gradient[1]);
                }
                let n = normal_from_gradient(nb.boundary_gradient(i));
                let bn = dot(b, n);
                [a[0] + b[0] - bn * n[0], a[1] + b[1] - bn * n[1]]
            })
            .collect()
    }

    /// One split step: neighbours and density, divergence-free solve, gravity and viscosity,
    /// incompressibility solve, then semi-implicit Euler.
    pub fn step(&self, particles: &mut [Particle], boundary: &BoundaryObject, dt: f64) -> Result<StepReport, SphError> {
        let dt = self.admissible_dt(particles, dt)?;
        let nb = self.neighborhood(particles, boundary)?;
        let rho = self.density_with(&nb, particles, boundary);
        for (p, r) in particles.iter_mut().zip(rho) {
            p.density = r;
        }
        let rho_b = boundary.rest_density;
        let mut v: Vec<[f64; 2]> = particles.iter().map(|p| p.velocity).collect();

        let src = self.source(&nb, particles, &v, rho_b, dt, SolverMode::DivergenceFree);
        let div = self.solve(&nb, particles, boundary, dt, SolverMode::DivergenceFree, &src)?;
        for (vi, a) in v.iter_mut().zip(&div.accelerations) {
            axpy(vi, dt, *a);
        }

        let visc = self.viscosity_with(&nb, particles, &v, self.params.viscosity);
        let g = self.params.gravity;
        for (vi, a) in v.iter_mut().zip(&visc) {
            axpy(vi, dt, [a[0] + g[0], a[1] + g[1]]);
        }

        let src = self.source(&nb, particles, &v, rho_b, dt, SolverMode::Incompressible);
        let inc = self.solve(&nb, particles, boundary, dt, SolverMode::Incompressible, &src)?;
        for (vi, a) in v.iter_mut().zip(&inc.accelerations) {
            axpy(vi, dt, *a);
        }

        let mut penetrations = 0;
        for ((p, vi), pr) in particles.iter_mut().zip(&v).zip(&inc.pressures) {
            p.velocity = *vi;
            p.pressure = *pr;
            p.position = p.position + Point2::new(vi[0], vi[1]) * dt;
            penetrations += usize::from(boundary.contains(p.position));
        }
        Ok(StepReport {
            dt,
            divergence: (div.iterations, div.residual),
            density: (inc.iterations, inc.residual),
            impulse_imbalance: div.impulse_imbalance.max(inc.impulse_imbalance),
            penetrations,
        })
    }

    /// `dt` halved until it meets the CFL bound, at most four times.
    fn admissible_dt(&self, particles: &[Particle], dt: f64) -> Result<f64, SphError> {
        if !(dt > 0.0) {
            return Err(SphError::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        let vmax = particles.iter().map(|p| dot(p.velocity, p.velocity).sqrt()).fold(0.0, f64::max);
        let limit = self.params.cfl * self.h();
        let mut dt_eff = dt;
        for _ in 0..=MAX_HALVINGS {
            if dt_eff * vmax <= limit {
                return Ok(dt_eff);
            }
            dt_eff *= 0.5;
        }
        Err(SphError::Cfl { dt, max_speed: vmax })
    }
}

fn normal_from_gradient(g: [f64; 2]) -> [f64; 2] {
    // G points into the wall
    let n = dot(g, g).sqrt();
    if n > NORMAL_EPS {
        [-g[0] / n, -g[1] / n]
    } else {
        [0.0; 2]
    }
}

fn impulse_imbalance(particles: &[Particle], acc: &[([f64; 2], [f64; 2])]) -> f64 {
    let mut sum = [0.0; 2];
    let mut largest: f64 = 0.0;
    for (p, (a, _)) in particles.iter().zip(acc) {
        axpy(&mut sum, p.mass, *a);
        largest = largest.max(p.mass * dot(*a, *a).sqrt());
    }
    if largest > 0.0 {
        dot(sum, sum).sqrt() / largest
    } else {
        0.0
    }
}
