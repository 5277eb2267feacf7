use crate::geometry::Triangle;
use crate::real::Real;

/// Linear field `A(x, y) = τ1 x + τ2 y + τ3` reconstructed from vertex values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauFactors<T> {
    pub tau: [T; 3],
    pub lambda: [T; 4],
    pub denominator: T,
}

impl<T: Real> TauFactors<T> {
    pub fn constant(value: T) -> Self {
        let z = T::zero();
        Self {
            tau: [z, z, value],
            lambda: [z; 4],
            denominator: T::one(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.tau[0] == T::zero() && self.tau[1] == T::zero()
    }

    pub fn eval(&self, x: T, y: T) -> T {
        self.tau[0] * x + self.tau[1] * y + self.tau[2]
    }
}

/// Barycentric reduction of the vertex values; `None` for a degenerate triangle.
pub fn compute_tau<T: Real>(t: &Triangle<T>, values: [T; 3]) -> Option<TauFactors<T>> {
    let [p0, p1, p2] = t.v;
    let [a0, a1, a2] = values;
    if a0 == a1 && a1 == a2 {
        return Some(TauFactors::constant(a0));
    }
    let den = (p1.y - p2.y) * (p0.x - p2.x) + (p2.x - p1.x) * (p0.y - p2.y);
    let scale = (p0 - p2).norm_sq().max((p1 - p2).norm_sq());
    if den.abs() <= T::lit(16.0) * T::epsilon() * scale {
        return None;
    }
    let lambda = [
        (a0 - a2) * (p1.y - p2.y) / den,
        (a0 - a2) * (p2.x - p1.x) / den,
        (a1 - a2) * (p2.y - p0.y) / den,
        (a1 - a2) * (p0.x - p2.x) / den,
    ];
    let t1 = lambda[0] + lambda[2];
    let t2 = lambda[1] + lambda[3];
    let t3 = a2 - (lambda[0] * p2.x + lambda[1] * p2.y + lambda[2] * p2.x + lambda[3] * p2.y);
    Some(TauFactors {
        tau: [t1, t2, t3],
        lambda,
        denominator: den,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;

    type P = Point2<f64>;

    #[test]
    fn constant_field() {
        let t = Triangle::new(P::new(0.1, 0.2), P::new(3.0, -1.0), P::new(0.5, 2.0));
        let tau = compute_tau(&t, [2.5, 2.5, 2.5]).unwrap();
        assert_eq!(tau.tau, [0.0, 0.0, 2.5]);
    }

    #[test]
    fn reproduces_linear_field() {
        let t = Triangle::new(P::new(0.0, 0.0), P::new(1.0, 0.0), P::new(0.0, 1.0));
        let tau = compute_tau(&t, [0.0, 1.0, 0.0]).unwrap();
        assert!((tau.tau[0] - 1.0).abs() < 1e-15 && tau.tau[1].abs() < 1e-15 && tau.tau[2].abs() < 1e-15);
        let t = Triangle::new(P::new(0.3, -0.7), P::new(2.1, 0.4), P::new(-0.6, 1.9));
        let f = |p: P| 0.4 * p.x - 1.3 * p.y + 0.25;
        let tau = compute_tau(&t, t.v.map(f)).unwrap();
        assert!((tau.tau[0] - 0.4).abs() < 1e-14);
        assert!((tau.tau[1] + 1.3).abs() < 1e-14);
        assert!((tau.tau[2] - 0.25).abs() < 1e-14);
        let tau = compute_tau(&t, t.v.map(|p| p.x)).unwrap();
        assert!((tau.tau[0] - 1.0).abs() < 1e-14 && tau.tau[1].abs() < 1e-14);
    }

    #[test]
    fn degenerate() {
        let t = Triangle::new(P::new(0.0, 0.0), P::new(1.0, 1.0), P::new(2.0, 2.0));
        assert!(compute_tau(&t, [0.0, 1.0, 2.0]).is_none());
    }
}
