//! Uniform-grid particle neighbours and per-triangle boundary integrals.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{BoundaryObject, Particle, SphError};
use crate::geometry::{closest_point_on_segment, point_in_triangle, Point2, Triangle};
use crate::kernels::PolyKernel;
use crate::triangle_integrator::TriangleIntegrator;

/// Particle `j` seen from particle `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTerm {
    pub j: usize,
    pub w: f64,
    /// `∇_{x_i} W(x_i − x_j)`
    pub grad: [f64; 2],
    /// `x_i − x_j`
    pub offset: [f64; 2],
}

/// Boundary triangle within the support of a particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    pub triangle: usize,
    /// Particle position minus the kernel-weighted centroid of the triangle
    /// (minus the closest point when the overlap is negligible).
    pub offset: [f64; 2],
    /// `∫_T W`
    pub volume: f64,
    /// `∇_{x_i} ∫_T W`
    pub gradient: [f64; 2],
    /// Row `k`: `∫_T (x_i − x′)_k ∇W(x_i − x′) dx′`, the field held at the current `x_i`.
    pub moment_gradient: [[f64; 2]; 2],
}

#[derive(Debug, Clone, Default)]
pub struct Neighborhood {
    pub pairs: Vec<Vec<PairTerm>>,
    pub contacts: Vec<Vec<Contact>>,
}

impl Neighborhood {
    pub fn boundary_volume(&self, i: usize) -> f64 {
        self.contacts[i].iter().map(|c| c.volume).sum()
    }

    pub fn boundary_gradient(&self, i: usize) -> [f64; 2] {
        self.contacts[i]
            .iter()
            .fold([0.0; 2], |a, c| [a[0] + c.gradient[0], a[1] + c.gradient[1]])
    }

    pub fn build(
        particles: &[Particle],
        boundary: &BoundaryObject,
        kernel: &PolyKernel<f64>,
        integrator: &TriangleIntegrator<f64>,
    ) -> Result<Self, SphError> {
        let h = kernel.support;
        let grid = Grid::new(particles, h);
        let pairs = particles
            .par_iter()
            .enumerate()
            .map(|(i, pi)| {
                let mut out = Vec::new();
                grid.visit(pi.position, |j| {
                    if j == i {
                        return;
                    }
                    let d = pi.position - particles[j].position;
                    let r = d.norm();
                    if r < h {
                        let (gx, gy) = kernel.gradient(d.x, d.y);
                        out.push(PairTerm {
                            j,
                            w: kernel.value(r),
                            grad: [gx, gy],
                            offset: [d.x, d.y],
                        });
                    }
                });
                out
            })
            .collect();
        let contacts = particles
            .par_iter()
            .map(|p| contacts_of(p.position, boundary, h, integrator))
            .collect::<Result<_, SphError>>()?;
        Ok(Self { pairs, contacts })
    }
}

fn contacts_of(
    x: Point2<f64>,
    boundary: &BoundaryObject,
    h: f64,
    integrator: &TriangleIntegrator<f64>,
) -> Result<Vec<Contact>, SphError> {
    let mut out = Vec::new();
    for k in boundary.candidates(x, h) {
        let t = &boundary.triangles()[k];
        let (dist, closest) = distance_to_triangle(x, t);
        if dist >= h {
            continue;
        }
        let r = integrator.integrate_triangle(x, h, t)?;
        let mx = integrator.integrate_triangle(x, h, &t.with_values(t.v.map(|v| x.x - v.x)))?;
        let my = integrator.integrate_triangle(x, h, &t.with_values(t.v.map(|v| x.y - v.y)))?;
        let offset = if r.value > 1e-12 * h * h {
            [mx.value / r.value, my.value / r.value]
        } else {
            let o = x - closest;
            [o.x, o.y]
        };
        out.push(Contact {
            triangle: k,
            offset,
            volume: r.value,
            gradient: r.gradient,
            moment_gradient: [mx.gradient, my.gradient],
        });
    }
    Ok(out)
}

/// Distance from `p` to the closed triangle and the closest point.
pub fn distance_to_triangle(p: Point2<f64>, t: &Triangle<f64>) -> (f64, Point2<f64>) {
    if point_in_triangle(p, t) {
        return (0.0, p);
    }
    let [a, b, c] = t.v;
    [(a, b), (b, c), (c, a)]
        .iter()
        .map(|&(u, v)| {
            let q = closest_point_on_segment(p, u, v);
            ((p - q).norm(), q)
        })
        .fold((f64::INFINITY, p), |best, cand| if cand.0 < best.0 { cand } else { best })
}

/// Buckets of particle indices on square cells of side `h`.
struct Grid {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl Grid {
    fn new(particles: &[Particle], cell: f64) -> Self {
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, p) in particles.iter().enumerate() {
            buckets.entry(Self::key(p.position, cell)).or_default().push(i);
        }
        Self { cell, buckets }
    }

    fn key(p: Point2<f64>, cell: f64) -> (i64, i64) {
        ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64)
    }

    fn visit(&self, p: Point2<f64>, mut f: impl FnMut(usize)) {
        let (cx, cy) = Self::key(p, self.cell);
        for dy in -1..=1 {
            for dx in -1..=1 {
                if let Some(b) = self.buckets.get(&(cx + dx, cy + dy)) {
                    b.iter().for_each(|&j| f(j));
                }
            }
        }
    }
}
