//! Value and gradient integrals of a kernel-weighted linear field over arbitrary triangles.

mod operators;
mod regions;
mod tau;
mod terms;
mod wedge;

use std::ops::{Add, AddAssign};

use thiserror::Error;

pub use operators::{
    field_operators, gradient_variant_weights, variant_scale, GradientVariant, ParticleState,
    DENSITY_CHANNEL,
};
pub use tau::{compute_tau, TauFactors};
pub use terms::{table1_terms, Channel, Moments, TermPlan, TermRequest};
pub use wedge::Branch;

use crate::elementary_regions::{DiscTable, RegionError};
use crate::geometry::{
    closest_point_on_segment, inside_unit_circle, near_unit_circle, GeometryError, Point2,
    Transform2, Triangle,
};
use crate::kernels::{kernel_derivative_coefficients, PolyKernel};
use crate::real::Real;
use regions::Ctx;

#[derive(Debug, Error)]
pub enum IntegrationError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Mesh(#[from] crate::mesh_io::MeshError),
    #[error("density must be positive, got {0}")]
    NonPositiveDensity(f64),
}

/// Value `⟨A⟩`, gradient `⟨∇A⟩` and the largest imaginary part discarded on the way.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegralResult<T> {
    pub value: T,
    pub gradient: [T; 2],
    pub imag_residual: T,
}

impl<T: Real> IntegralResult<T> {
    pub fn zero() -> Self {
        Self {
            value: T::zero(),
            gradient: [T::zero(); 2],
            imag_residual: T::zero(),
        }
    }
}

impl<T: Real> Add for IntegralResult<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            value: self.value + o.value,
            gradient: [self.gradient[0] + o.gradient[0], self.gradient[1] + o.gradient[1]],
            imag_residual: self.imag_residual.max(o.imag_residual),
        }
    }
}

impl<T: Real> AddAssign for IntegralResult<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> std::iter::Sum for IntegralResult<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

/// Relative agreement demanded between the two branches at a case boundary (debug builds).
const BRANCH_AGREEMENT: f64 = 1e-8;

/// Closed-form triangle integrator for one polynomial kernel.
#[derive(Debug, Clone)]
pub struct TriangleIntegrator<T> {
    kernel: PolyKernel<T>,
    constant_plan: TermPlan<T>,
    linear_plan: TermPlan<T>,
    disc: DiscTable<T>,
}

impl<T: Real> TriangleIntegrator<T> {
    pub fn new(kernel: PolyKernel<T>) -> Self {
        let db = kernel_derivative_coefficients(&kernel);
        let b = &kernel.coefficients;
        let constant_plan = TermPlan::new(table1_terms(b, &db, false));
        let linear_plan = TermPlan::new(table1_terms(b, &db, true));
        let disc = DiscTable::new(kernel.degree() as u32 + 3);
        Self {
            kernel,
            constant_plan,
            linear_plan,
            disc,
        }
    }

    pub fn wendland4() -> Self {
        Self::new(PolyKernel::wendland4())
    }

    pub fn kernel(&self) -> &PolyKernel<T> {
        &self.kernel
    }

    fn ctx(&self, tau: &TauFactors<T>) -> Ctx<'_, T> {
        Ctx {
            plan: if tau.is_constant() {
                &self.constant_plan
            } else {
                &self.linear_plan
            },
            disc: &self.disc,
            tau: tau.tau,
        }
    }

    /// Applies `C2` (value) and `C2/h` (gradient) to unit-frame moments.
    fn finish(&self, m: Moments<T>, h: T) -> IntegralResult<T> {
        let c2 = self.kernel.c2;
        let g = c2 / h;
        IntegralResult {
            value: m.m[0].re * c2,
            gradient: [m.m[1].re * g, m.m[2].re * g],
            imag_residual: m.imag_max() * c2,
        }
    }

    /// Disc of radius `d` (unit-support frame, `h = 1`).
    pub fn integrate_disc(&self, d: T, tau: &TauFactors<T>) -> Result<IntegralResult<T>, IntegrationError> {
        Ok(self.finish(self.ctx(tau).disc(d)?, T::one()))
    }

    /// Sector between the rays through `v1` and `v2` with radius `d`.
    pub fn integrate_sector(
        &self,
        v1: Point2<T>,
        v2: Point2<T>,
        d: T,
        tau: &TauFactors<T>,
    ) -> Result<IntegralResult<T>, IntegrationError> {
        Ok(self.finish(self.ctx(tau).sector(v1, v2, d)?, T::one()))
    }

    /// Part of the unit disc beyond the line `t0 t1`, on the side of `side`.
    pub fn integrate_segment(
        &self,
        t0: Point2<T>,
        t1: Point2<T>,
        side: Point2<T>,
        tau: &TauFactors<T>,
    ) -> Result<IntegralResult<T>, IntegrationError> {
        Ok(self.finish(self.ctx(tau).segment(t0, t1, side)?, T::one()))
    }

    /// Triangle `(0, v1, v2)` clipped to the unit disc.
    pub fn integrate_stub(
        &self,
        v1: Point2<T>,
        v2: Point2<T>,
        tau: &TauFactors<T>,
    ) -> Result<IntegralResult<T>, IntegrationError> {
        Ok(self.finish(self.ctx(tau).fan(v1, v2)?, T::one()))
    }

    pub fn integrate_wedge(
        &self,
        v: [Point2<T>; 3],
        tau: &TauFactors<T>,
    ) -> Result<IntegralResult<T>, IntegrationError> {
        Ok(self.finish(self.ctx(tau).wedge(v[0], v[1], v[2])?, T::one()))
    }

    /// `v0`, `v1` inside the unit disc, `v2` outside.
    pub fn integrate_triangle2(
        &self,
        v: [Point2<T>; 3],
        tau: &TauFactors<T>,
    ) -> Result<IntegralResult<T>, IntegrationError> {
        Ok(self.finish(self.ctx(tau).triangle2(v[0], v[1], v[2])?, T::one()))
    }

    /// All vertices inside the unit disc.
    pub fn integrate_triangle3(
        &self,
        v: [Point2<T>; 3],
        tau: &TauFactors<T>,
    ) -> Result<IntegralResult<T>, IntegrationError> {
        Ok(self.finish(self.ctx(tau).triangle3(v[0], v[1], v[2])?, T::one()))
    }

    /// `∫_T A(x') W(query − x', h) dx'` and its gradient with respect to `query`.
    ///
    /// The field comes from `t.values` (constant one when absent).
    pub fn integrate_triangle(
        &self,
        query: Point2<T>,
        h: T,
        t: &Triangle<T>,
    ) -> Result<IntegralResult<T>, IntegrationError> {
        let tf = Transform2::normalization(query, h)?;
        let local = t.transformed(&tf).oriented_ccw();
        if local.signed_area() <= T::zero() || !outside_free(&local) {
            return Ok(IntegralResult::zero());
        }
        let values = local.values.unwrap_or([T::one(); 3]);
        let Some(tau) = compute_tau(&local, values) else {
            return Ok(IntegralResult::zero());
        };
        let ctx = self.ctx(&tau);
        let inside = local.v.map(inside_unit_circle);
        let m = ctx.dispatch(local.v, inside)?;
        if cfg!(debug_assertions) && local.v.iter().any(|p| near_unit_circle(*p)) {
            let flipped = [0, 1, 2].map(|i| inside[i] != near_unit_circle(local.v[i]));
            let alt = ctx.dispatch(local.v, flipped)?;
            let scale = m.norm_max().max(T::one());
            assert!(
                (m - alt).norm_max() <= T::lit(BRANCH_AGREEMENT) * scale,
                "branches disagree at the support boundary"
            );
        }
        Ok(self.finish(m, h))
    }

    /// Which branch `integrate_triangle` takes.
    pub fn classify(&self, query: Point2<T>, h: T, t: &Triangle<T>) -> Result<Branch, IntegrationError> {
        let tf = Transform2::normalization(query, h)?;
        let local = t.transformed(&tf).oriented_ccw();
        if local.signed_area() <= T::zero() || !outside_free(&local) {
            return Ok(Branch::Empty);
        }
        Ok(wedge::classify(local.v))
    }
}

/// Cheap rejection: `false` when the triangle is farther than the support from the origin.
fn outside_free<T: Real>(t: &Triangle<T>) -> bool {
    let o = Point2::origin();
    if crate::geometry::point_in_triangle(o, t) {
        return true;
    }
    let [a, b, c] = t.v;
    let lim = T::one();
    [(a, b), (b, c), (c, a)]
        .iter()
        .any(|&(p, q)| closest_point_on_segment(o, p, q).norm() < lim)
}
