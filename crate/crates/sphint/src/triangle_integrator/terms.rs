use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::elementary_regions::{FundamentalTerm, RegionError};
use crate::geometry::{Point2, Transform2};
use crate::real::Real;
use crate::special_functions::C;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Value,
    Dx,
    Dy,
}

impl Channel {
    fn index(self) -> usize {
        match self {
            Channel::Value => 0,
            Channel::Dx => 1,
            Channel::Dy => 2,
        }
    }
}

/// One weighted fundamental integral contributing `weight · τ[tau_index] · ∫ term` to a channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermRequest<T> {
    pub channel: Channel,
    pub tau_index: usize,
    pub weight: T,
    pub term: FundamentalTerm,
}

/// Expands the kernel sums for value and gradient into fundamental integrals.
///
/// With `A = τ1 r cos θ + τ2 r sin θ + τ3` and the polar Jacobian folded into the power:
/// the value uses `b_k` with `cos θ`, `sin θ` at `k+2` and `1` at `k+1`; the gradient is
/// `−∫ A k'(r) (cos θ, sin θ) r dr dθ`, where `cos²`, `sin²` and `sin cos` are reduced to
/// second harmonics.
pub fn table1_terms<T: Real>(b: &[T], db: &[T], linear: bool) -> Vec<TermRequest<T>> {
    let mut out = Vec::new();
    let mut push = |channel, tau_index, weight: T, term| {
        if weight != T::zero() && (linear || tau_index == 2) {
            out.push(TermRequest {
                channel,
                tau_index,
                weight,
                term,
            });
        }
    };
    for (k, &bk) in b.iter().enumerate() {
        let k = k as u32;
        push(Channel::Value, 0, bk, FundamentalTerm::c(k + 2, 1));
        push(Channel::Value, 1, bk, FundamentalTerm::s(k + 2, 1));
        push(Channel::Value, 2, bk, FundamentalTerm::p(k + 1));
    }
    let half = T::lit(0.5);
    for (i, &d) in db.iter().enumerate() {
        let k = i as u32 + 1;
        let w = -d;
        push(Channel::Dx, 0, w * half, FundamentalTerm::p(k + 1));
        push(Channel::Dx, 0, w * half, FundamentalTerm::c(k + 1, 2));
        push(Channel::Dx, 1, w * half, FundamentalTerm::s(k + 1, 2));
        push(Channel::Dx, 2, w, FundamentalTerm::c(k, 1));
        push(Channel::Dy, 0, w * half, FundamentalTerm::s(k + 1, 2));
        push(Channel::Dy, 1, w * half, FundamentalTerm::p(k + 1));
        push(Channel::Dy, 1, -w * half, FundamentalTerm::c(k + 1, 2));
        push(Channel::Dy, 2, w, FundamentalTerm::s(k, 1));
    }
    out
}

/// Requests grouped by distinct fundamental term so each is integrated once per region.
#[derive(Debug, Clone)]
pub struct TermPlan<T> {
    pub terms: Vec<FundamentalTerm>,
    pub requests: Vec<(usize, TermRequest<T>)>,
}

impl<T: Real> TermPlan<T> {
    pub fn new(requests: Vec<TermRequest<T>>) -> Self {
        let mut terms: Vec<FundamentalTerm> = requests.iter().map(|r| r.term).collect();
        terms.sort();
        terms.dedup();
        let requests = requests
            .into_iter()
            .map(|r| (terms.binary_search(&r.term).expect("term present"), r))
            .collect();
        Self { terms, requests }
    }

    /// Integrates every term with `eval` and combines them with the local field `tau`.
    pub fn moments(
        &self,
        tau: [T; 3],
        mut eval: impl FnMut(FundamentalTerm) -> Result<C<T>, RegionError>,
    ) -> Result<Moments<T>, RegionError> {
        let mut values = Vec::with_capacity(self.terms.len());
        for &t in &self.terms {
            values.push(eval(t)?);
        }
        let mut acc = [C::new(T::zero(), T::zero()); 3];
        for &(i, r) in &self.requests {
            acc[r.channel.index()] += values[i] * (r.weight * tau[r.tau_index]);
        }
        Ok(Moments { m: acc })
    }
}

/// Unscaled value and gradient integrals in the unit-support frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments<T> {
    pub m: [C<T>; 3],
}

impl<T: Real> Moments<T> {
    pub fn zero() -> Self {
        Self {
            m: [C::new(T::zero(), T::zero()); 3],
        }
    }

    /// Maps a gradient computed in a local frame (`x_local = frame · x`) back.
    pub fn from_local(self, frame: &Transform2<T>) -> Self {
        let [v, gx, gy] = self.m;
        let re = frame.apply_vector_transposed(Point2::new(gx.re, gy.re));
        let im = frame.apply_vector_transposed(Point2::new(gx.im, gy.im));
        Self {
            m: [v, C::new(re.x, im.x), C::new(re.y, im.y)],
        }
    }

    pub fn imag_max(&self) -> T {
        self.m.iter().fold(T::zero(), |a, z| a.max(z.im.abs()))
    }

    pub fn norm_max(&self) -> T {
        self.m.iter().fold(T::zero(), |a, z| a.max(z.norm()))
    }
}

impl<T: Real> Add for Moments<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            m: [self.m[0] + o.m[0], self.m[1] + o.m[1], self.m[2] + o.m[2]],
        }
    }
}

impl<T: Real> AddAssign for Moments<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Moments<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Real> Neg for Moments<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            m: self.m.map(|z| -z),
        }
    }
}

impl<T: Real> Mul<T> for Moments<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self {
            m: self.m.map(|z| z * s),
        }
    }
}

/// Rotates the gradient part of `tau` into a local frame.
pub fn tau_local<T: Real>(tau: [T; 3], frame: &Transform2<T>) -> [T; 3] {
    let g = frame.apply_vector(Point2::new(tau[0], tau[1]));
    [g.x, g.y, tau[2]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elementary_regions::Family;

    #[test]
    fn constant_value_channel_uses_only_power_terms() {
        let b = [1.0f64, -3.0, 2.0];
        let db = [-3.0, 4.0];
        let req = table1_terms(&b, &db, false);
        let value: Vec<_> = req.iter().filter(|r| r.channel == Channel::Value).collect();
        assert!(value.iter().all(|r| r.term.family == Family::P));
        assert_eq!(value.iter().map(|r| r.term.n).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn linear_value_adds_first_harmonics() {
        let req = table1_terms(&[1.0f64], &[], true);
        let terms: Vec<_> = req.iter().map(|r| r.term).collect();
        assert!(terms.contains(&FundamentalTerm::c(2, 1)));
        assert!(terms.contains(&FundamentalTerm::s(2, 1)));
        assert!(terms.contains(&FundamentalTerm::p(1)));
    }

    #[test]
    fn gradient_x_terms() {
        let req = table1_terms(&[1.0f64, 0.0, -1.0], &[0.0, -2.0], true);
        let dx: Vec<_> = req.iter().filter(|r| r.channel == Channel::Dx).map(|r| r.term).collect();
        assert!(dx.contains(&FundamentalTerm::p(3)));
        assert!(dx.contains(&FundamentalTerm::c(3, 2)));
        assert!(dx.contains(&FundamentalTerm::c(2, 1)));
    }
}
