//! Disc, sector, segment and stub integrals in the unit-support frame.

use super::terms::{tau_local, Moments, TermPlan};
use crate::elementary_regions::{
    cone_integral, segment_integral, stub_integral, DiscTable, RegionError,
};
use crate::geometry::{Point2, Transform2};
use crate::real::Real;
use crate::special_functions::C;

/// Per-evaluation state: the term plan and the field in the unit-support frame.
pub(crate) struct Ctx<'a, T> {
    pub plan: &'a TermPlan<T>,
    pub disc: &'a DiscTable<T>,
    pub tau: [T; 3],
}

/// Relative size below which a fan triangle is treated as flat.
fn flat_tol<T: Real>() -> T {
    T::lit(64.0) * T::epsilon()
}

/// Frame taking the direction of `v1` onto the positive x-axis, reflected when needed so that
/// `v2` lands in the upper half plane.
pub(crate) fn upper_frame<T: Real>(v1: Point2<T>, v2: Point2<T>) -> Transform2<T> {
    let r = Transform2::align_x(v1 * v1.norm().recip());
    if r.apply_vector(v2).y < T::zero() {
        Transform2::mirror_y().after(&r)
    } else {
        r
    }
}

impl<T: Real> Ctx<'_, T> {
    fn local(
        &self,
        frame: &Transform2<T>,
        eval: impl FnMut(crate::elementary_regions::FundamentalTerm) -> Result<C<T>, RegionError>,
    ) -> Result<Moments<T>, RegionError> {
        let m = self.plan.moments(tau_local(self.tau, frame), eval)?;
        Ok(m.from_local(frame))
    }

    /// Disc of radius `d` centred on the query.
    pub fn disc(&self, d: T) -> Result<Moments<T>, RegionError> {
        self.plan.moments(self.tau, |t| Ok(self.disc.full(t, d)))
    }

    /// Sector between the rays through `v1` and `v2` (opening angle at most π), radius `d`.
    pub fn sector(&self, v1: Point2<T>, v2: Point2<T>, d: T) -> Result<Moments<T>, RegionError> {
        if v1.norm() == T::zero() || v2.norm() == T::zero() || d <= T::zero() {
            return Ok(Moments::zero());
        }
        let frame = upper_frame(v1, v2);
        let w = frame.apply_vector(v2);
        let gamma = w.y.atan2(w.x);
        self.local(&frame, |t| Ok(cone_integral(t, T::zero(), gamma, d)))
    }

    /// Sector starting at the direction of `start` and sweeping `delta` counterclockwise.
    pub fn sector_ccw(&self, start: Point2<T>, delta: T, d: T) -> Result<Moments<T>, RegionError> {
        if delta <= T::zero() || start.norm() == T::zero() {
            return Ok(Moments::zero());
        }
        let frame = Transform2::align_x(start * start.norm().recip());
        self.local(&frame, |t| Ok(cone_integral(t, T::zero(), delta, d)))
    }

    /// Part of the unit disc on the side of the line `e0 e1` that contains `side`.
    pub fn segment(
        &self,
        e0: Point2<T>,
        e1: Point2<T>,
        side: Point2<T>,
    ) -> Result<Moments<T>, RegionError> {
        let dir = e1 - e0;
        let len = dir.norm();
        if len == T::zero() {
            return Ok(Moments::zero());
        }
        let mut n = dir.perp() * len.recip();
        if (side - e0).dot(n) < T::zero() {
            n = -n;
        }
        let d = e0.dot(n);
        let frame = Transform2::align_x(n);
        self.local(&frame, |t| segment_integral(t, d))
    }

    /// Triangle `(0, a, b)` clipped to the unit disc, as sector plus radial stub pieces.
    pub fn fan(&self, a: Point2<T>, b: Point2<T>) -> Result<Moments<T>, RegionError> {
        let (na, nb) = (a.norm(), b.norm());
        if na == T::zero() || nb == T::zero() || a.cross(b).abs() <= flat_tol::<T>() * na * nb {
            return Ok(Moments::zero());
        }
        let d = b - a;
        let t = -a.dot(d) / d.norm_sq();
        let tol = T::lit(1e-12);
        if t > tol && t < T::one() - tol {
            // both halves are right stubs with the foot as their near vertex
            let foot = a + d * t;
            if foot.norm() <= flat_tol::<T>() * na.max(nb) {
                return Ok(Moments::zero());
            }
            return Ok(self.stub(a, foot)? + self.stub(b, foot)?);
        }
        let (far, near) = if na >= nb { (a, b) } else { (b, a) };
        self.stub(far, near)
    }

    /// Stub with the perpendicular foot at or beyond `near`: sector up to `|near|` plus the
    /// radial part out to `|far|`, both clipped to the unit disc.
    pub fn stub(&self, far: Point2<T>, near: Point2<T>) -> Result<Moments<T>, RegionError> {
        let frame = upper_frame(far, near);
        let l = far.norm();
        let nl = frame.apply_vector(near);
        let gamma = nl.y.atan2(nl.x);
        let w = nl - Point2::new(l, T::zero());
        let beta = w.y.atan2(-w.x);
        let rn = near.norm().min(T::one());
        let rl = l.min(T::one());
        let stub_ok = rn < rl && beta > T::zero() && beta < T::FRAC_PI_2();
        self.local(&frame, |t| {
            let mut v = cone_integral(t, T::zero(), gamma, rn);
            if stub_ok {
                v += stub_integral(t, l, beta, rn, rl)?;
            }
            Ok(v)
        })
    }
}
