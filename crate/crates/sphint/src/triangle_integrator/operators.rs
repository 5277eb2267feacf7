use rayon::prelude::*;

use super::{IntegralResult, IntegrationError, TriangleIntegrator};
use crate::geometry::{barycentric, Point2};
use crate::mesh_io::{FieldRef, TriangleMesh};
use crate::real::Real;

/// Vertex channel holding boundary densities; absent means the particle's own density.
pub const DENSITY_CHANNEL: &str = "density";

/// Which discrete gradient the boundary term feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GradientVariant {
    /// `f_i = A_i`
    #[default]
    Basic,
    /// `f_i = ρ_i (A_i − A(0))`, result divided by `ρ(0)`; exact for constant fields.
    Difference,
    /// `f_i = ρ_i (A_i/ρ_i² + A(0)/ρ(0)²)`, result multiplied by `ρ(0)`; momentum conserving.
    Symmetric,
}

impl std::str::FromStr for GradientVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "basic" => Ok(Self::Basic),
            "difference" => Ok(Self::Difference),
            "symmetric" => Ok(Self::Symmetric),
            _ => Err(format!("unknown gradient variant `{s}` (basic, difference, symmetric)")),
        }
    }
}

/// Density and field value at the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleState<T> {
    pub density: T,
    pub value: T,
}

/// Per-vertex quantities that replace `A_i` before the barycentric reduction.
pub fn gradient_variant_weights<T: Real>(
    variant: GradientVariant,
    state: &ParticleState<T>,
    values: [T; 3],
    densities: [T; 3],
) -> Result<[T; 3], IntegrationError> {
    if variant == GradientVariant::Basic {
        return Ok(values);
    }
    if let Some(&bad) = densities.iter().chain([&state.density]).find(|r| !(**r > T::zero())) {
        return Err(IntegrationError::NonPositiveDensity(bad.to_f64_lossy()));
    }
    let mut out = values;
    for i in 0..3 {
        let r = densities[i];
        out[i] = match variant {
            GradientVariant::Difference => r * (values[i] - state.value),
            GradientVariant::Symmetric => {
                r * (values[i] / (r * r) + state.value / (state.density * state.density))
            }
            GradientVariant::Basic => unreachable!(),
        };
    }
    Ok(out)
}

/// Factor applied to the integrals computed from [`gradient_variant_weights`].
pub fn variant_scale<T: Real>(variant: GradientVariant, state: &ParticleState<T>) -> T {
    match variant {
        GradientVariant::Basic => T::one(),
        GradientVariant::Difference => state.density.recip(),
        GradientVariant::Symmetric => state.density,
    }
}

fn scale<T: Real>(r: IntegralResult<T>, s: T) -> IntegralResult<T> {
    IntegralResult {
        value: r.value * s,
        gradient: [r.gradient[0] * s, r.gradient[1] * s],
        imag_residual: r.imag_residual * s.abs(),
    }
}

impl TriangleIntegrator<f64> {
    /// Sum over all mesh triangles carrying `channel` (none: constant one).
    pub fn integrate_mesh(
        &self,
        query: Point2<f64>,
        h: f64,
        mesh: &TriangleMesh,
        channel: Option<&str>,
    ) -> Result<IntegralResult<f64>, IntegrationError> {
        let field = channel.map(|c| mesh.channel(c)).transpose()?;
        (0..mesh.len())
            .map(|i| self.integrate_triangle(query, h, &mesh.triangle(i, field)))
            .sum()
    }

    /// Field value at `query`: barycentric on the covering triangle, otherwise the
    /// kernel-weighted average of the boundary, otherwise zero.
    pub fn reference_value(
        &self,
        query: Point2<f64>,
        h: f64,
        mesh: &TriangleMesh,
        field: FieldRef<'_>,
    ) -> Result<f64, IntegrationError> {
        for i in 0..mesh.len() {
            let t = mesh.triangle(i, Some(field));
            if let Some(b) = barycentric(query, &t) {
                if b.iter().all(|&l| l >= 0.0) {
                    let v = t.values.expect("field attached");
                    return Ok(b[0] * v[0] + b[1] * v[1] + b[2] * v[2]);
                }
            }
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..mesh.len() {
            num += self.integrate_triangle(query, h, &mesh.triangle(i, Some(field)))?.value;
            den += self.integrate_triangle(query, h, &mesh.triangle(i, None))?.value;
        }
        Ok(if den > 0.0 { num / den } else { 0.0 })
    }

    /// One query of [`TriangleIntegrator::evaluate`] with an explicit particle state.
    pub fn evaluate_with_state(
        &self,
        query: Point2<f64>,
        h: f64,
        mesh: &TriangleMesh,
        channel: Option<&str>,
        variant: GradientVariant,
        state: &ParticleState<f64>,
    ) -> Result<IntegralResult<f64>, IntegrationError> {
        if variant == GradientVariant::Basic {
            return self.integrate_mesh(query, h, mesh, channel);
        }
        let field = channel.map(|c| mesh.channel(c)).transpose()?;
        let densities = mesh.vertex_channels.get(DENSITY_CHANNEL);
        let mut acc = IntegralResult::zero();
        for i in 0..mesh.len() {
            let mut t = mesh.triangle(i, field);
            let values = t.values.unwrap_or([1.0; 3]);
            let rho = match densities {
                Some(d) => mesh.triangles[i].map(|k| d[k]),
                None => [state.density; 3],
            };
            t.values = Some(gradient_variant_weights(variant, state, values, rho)?);
            acc += self.integrate_triangle(query, h, &t)?;
        }
        Ok(scale(acc, variant_scale(variant, state)))
    }

    /// Value and gradient integrals of `channel` at every query point, in parallel.
    ///
    /// Non-basic variants take `A(0)` from [`TriangleIntegrator::reference_value`] and
    /// `ρ(0) = 1`.
    pub fn evaluate(
        &self,
        queries: &[Point2<f64>],
        h: f64,
        mesh: &TriangleMesh,
        channel: Option<&str>,
        variant: GradientVariant,
    ) -> Result<Vec<IntegralResult<f64>>, IntegrationError> {
        if let Some(c) = channel {
            mesh.channel(c)?;
        }
        queries
            .par_iter()
            .map(|&q| {
                let value = match (variant, channel) {
                    (GradientVariant::Basic, _) => 0.0,
                    (_, Some(c)) => self.reference_value(q, h, mesh, mesh.channel(c)?)?,
                    (_, None) => 1.0,
                };
                let state = ParticleState { density: 1.0, value };
                self.evaluate_with_state(q, h, mesh, channel, variant, &state)
            })
            .collect()
    }
}

/// `(⟨∇·A⟩, ⟨∇×A⟩)` for the vector field stored in channels `(ax, ay)`.
pub fn field_operators(
    integrator: &TriangleIntegrator<f64>,
    query: Point2<f64>,
    h: f64,
    mesh: &TriangleMesh,
    channels: (&str, &str),
) -> Result<(f64, f64), IntegrationError> {
    let gx = integrator.integrate_mesh(query, h, mesh, Some(channels.0))?.gradient;
    let gy = integrator.integrate_mesh(query, h, mesh, Some(channels.1))?.gradient;
    Ok((gx[0] + gy[1], gy[0] - gx[1]))
}
