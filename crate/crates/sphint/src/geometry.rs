//! 2D points, transforms and the predicates used by the region integrators.

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::real::Real;

/// Vertices closer than this to the unit circle count as lying on it (and inside).
pub const ON_CIRCLE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("line direction must be nonzero")]
    ZeroDirection,
    #[error("edge endpoints coincide")]
    DegenerateEdge,
    #[error("support radius must be positive, got {0}")]
    NonPositiveSupport(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn angle(self) -> T {
        self.y.atan2(self.x)
    }

    pub fn lerp(self, o: Self, t: T) -> Self {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<T: Real> Add for Point2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Real> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Real> Mul<T> for Point2<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl<T: Real> Neg for Point2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Homogeneous 3x3 affine transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform2<T> {
    m: [[T; 3]; 3],
    improper: bool,
}

impl<T: Real> Transform2<T> {
    /// Builds `p -> L p + t` from the row-major linear part `L = [[a, b], [c, d]]`.
    pub fn affine(a: T, b: T, c: T, d: T, tx: T, ty: T) -> Self {
        let (z, o) = (T::zero(), T::one());
        Self {
            m: [[a, b, tx], [c, d, ty], [z, z, o]],
            improper: a * d - b * c < z,
        }
    }

    pub fn identity() -> Self {
        let (z, o) = (T::zero(), T::one());
        Self::affine(o, z, z, o, z, z)
    }

    pub fn translation(t: Point2<T>) -> Self {
        let (z, o) = (T::zero(), T::one());
        Self::affine(o, z, z, o, t.x, t.y)
    }

    pub fn scaling(s: T) -> Self {
        let z = T::zero();
        Self::affine(s, z, z, s, z, z)
    }

    /// Counterclockwise rotation by `angle`.
    pub fn rotation(angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::affine(c, -s, s, c, T::zero(), T::zero())
    }

    /// Rotation taking the unit vector `u` onto the positive x-axis.
    pub fn align_x(u: Point2<T>) -> Self {
        Self::affine(u.x, u.y, -u.y, u.x, T::zero(), T::zero())
    }

    /// Reflection `y -> -y`.
    pub fn mirror_y() -> Self {
        let (z, o) = (T::zero(), T::one());
        Self::affine(o, z, z, -o, z, z)
    }

    /// The normalization transform: shift by `-query`, then scale by `1/h`.
    pub fn normalization(query: Point2<T>, h: T) -> Result<Self, GeometryError> {
        if !(h > T::zero()) {
            return Err(GeometryError::NonPositiveSupport(h.to_f64_lossy()));
        }
        let s = h.recip();
        let z = T::zero();
        Ok(Self::affine(s, z, z, s, -query.x * s, -query.y * s))
    }

    pub fn is_improper(&self) -> bool {
        self.improper
    }

    pub fn matrix(&self) -> [[T; 3]; 3] {
        self.m
    }

    /// `self ∘ first`: applies `first`, then `self`.
    pub fn after(&self, first: &Self) -> Self {
        let mut m = [[T::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.m[i][k] * first.m[k][j]).sum();
            }
        }
        Self {
            m,
            improper: self.improper != first.improper,
        }
    }

    pub fn apply(&self, p: Point2<T>) -> Point2<T> {
        let m = &self.m;
        Point2::new(
            m[0][0] * p.x + m[0][1] * p.y + m[0][2],
            m[1][0] * p.x + m[1][1] * p.y + m[1][2],
        )
    }

    /// Applies only the linear part.
    pub fn apply_vector(&self, v: Point2<T>) -> Point2<T> {
        let m = &self.m;
        Point2::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)
    }

    /// Applies the transposed linear part, which inverts orthogonal maps.
    pub fn apply_vector_transposed(&self, v: Point2<T>) -> Point2<T> {
        let m = &self.m;
        Point2::new(m[0][0] * v.x + m[1][0] * v.y, m[0][1] * v.x + m[1][1] * v.y)
    }

    pub fn inverse(&self) -> Self {
        let m = &self.m;
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let (a, b, c, d) = (m[1][1] / det, -m[0][1] / det, -m[1][0] / det, m[0][0] / det);
        let tx = -(a * m[0][2] + b * m[1][2]);
        let ty = -(c * m[0][2] + d * m[1][2]);
        Self::affine(a, b, c, d, tx, ty)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle<T> {
    pub v: [Point2<T>; 3],
    pub values: Option<[T; 3]>,
}

impl<T: Real> Triangle<T> {
    pub fn new(v0: Point2<T>, v1: Point2<T>, v2: Point2<T>) -> Self {
        Self {
            v: [v0, v1, v2],
            values: None,
        }
    }

    pub fn with_values(mut self, values: [T; 3]) -> Self {
        self.values = Some(values);
        self
    }

    pub fn signed_area(&self) -> T {
        signed_area(self.v[0], self.v[1], self.v[2])
    }

    pub fn centroid(&self) -> Point2<T> {
        let third = T::one() / T::lit(3.0);
        (self.v[0] + self.v[1] + self.v[2]) * third
    }

    /// Same triangle with counterclockwise vertex order (values follow their vertices).
    pub fn oriented_ccw(&self) -> Self {
        if self.signed_area() < T::zero() {
            self.reversed()
        } else {
            *self
        }
    }

    pub fn reversed(&self) -> Self {
        Self {
            v: [self.v[0], self.v[2], self.v[1]],
            values: self.values.map(|a| [a[0], a[2], a[1]]),
        }
    }

    pub fn transformed(&self, tf: &Transform2<T>) -> Self {
        Self {
            v: self.v.map(|p| tf.apply(p)),
            values: self.values,
        }
    }
}

/// Intersections of the line `origin + λ·dir` with a circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineCircle<T> {
    pub count: usize,
    pub lambda_n: T,
    pub lambda_p: T,
}

pub fn line_circle_intersection<T: Real>(
    origin: Point2<T>,
    dir: Point2<T>,
    center: Point2<T>,
    radius: T,
) -> Result<LineCircle<T>, GeometryError> {
    let a = dir.norm_sq();
    if a == T::zero() {
        return Err(GeometryError::ZeroDirection);
    }
    let f = origin - center;
    // a λ² + 2 b λ + c = 0
    let b = f.dot(dir);
    let c = f.norm_sq() - radius * radius;
    // perpendicular offset computed via the cross product avoids b² - a c cancellation
    let off = f.cross(dir);
    let disc = a * radius * radius - off * off;
    if disc < T::zero() {
        return Ok(LineCircle {
            count: 0,
            lambda_n: T::nan(),
            lambda_p: T::nan(),
        });
    }
    if disc == T::zero() {
        let l = -b / a;
        return Ok(LineCircle {
            count: 1,
            lambda_n: l,
            lambda_p: l,
        });
    }
    let s = disc.sqrt();
    // numerically stable pair of roots
    let q = if b > T::zero() { -(b + s) } else { -b + s };
    let (mut l1, mut l2) = if q == T::zero() {
        (-s / a, s / a)
    } else {
        (q / a, c / q)
    };
    if l1 > l2 {
        std::mem::swap(&mut l1, &mut l2);
    }
    Ok(LineCircle {
        count: 2,
        lambda_n: l1,
        lambda_p: l2,
    })
}

/// Distance from the origin to the line through `e0`, `e1`, negated when the origin is on the
/// integrated side.
pub fn signed_edge_distance<T: Real>(
    e0: Point2<T>,
    e1: Point2<T>,
    origin_inside: bool,
) -> Result<T, GeometryError> {
    let d = e1 - e0;
    let len = d.norm();
    if len == T::zero() {
        return Err(GeometryError::DegenerateEdge);
    }
    let dist = (e0.cross(d) / len).abs();
    Ok(if origin_inside { -dist } else { dist })
}

pub fn signed_area<T: Real>(a: Point2<T>, b: Point2<T>, c: Point2<T>) -> T {
    (b - a).cross(c - a) * T::lit(0.5)
}

/// Barycentric coordinates of `p`, or `None` for a degenerate triangle.
pub fn barycentric<T: Real>(p: Point2<T>, t: &Triangle<T>) -> Option<[T; 3]> {
    let [a, b, c] = t.v;
    let area = signed_area(a, b, c);
    if area == T::zero() {
        return None;
    }
    let l0 = signed_area(p, b, c) / area;
    let l1 = signed_area(a, p, c) / area;
    Some([l0, l1, T::one() - l0 - l1])
}

/// Boundary points count as inside; the tolerance scales with the triangle's size.
pub fn point_in_triangle<T: Real>(p: Point2<T>, t: &Triangle<T>) -> bool {
    let [a, b, c] = t.v;
    let area = signed_area(a, b, c);
    if area == T::zero() {
        return false;
    }
    let scale = (b - a).norm_sq().max((c - b).norm_sq()).max((a - c).norm_sq());
    let tol = T::lit(64.0) * T::epsilon() * scale;
    let s = area.signum();
    let subs = [
        signed_area(p, b, c),
        signed_area(a, p, c),
        signed_area(a, b, p),
    ];
    subs.iter().all(|&w| w * s >= -tol)
}

/// Like [`point_in_triangle`] but without the boundary tolerance.
pub fn point_strictly_in_triangle<T: Real>(p: Point2<T>, t: &Triangle<T>) -> bool {
    let [a, b, c] = t.v;
    let area = signed_area(a, b, c);
    if area == T::zero() {
        return false;
    }
    let s = area.signum();
    [
        signed_area(p, b, c),
        signed_area(a, p, c),
        signed_area(a, b, p),
    ]
    .iter()
    .all(|&w| w * s > T::zero())
}

pub fn closest_point_on_segment<T: Real>(p: Point2<T>, a: Point2<T>, b: Point2<T>) -> Point2<T> {
    let d = b - a;
    let l2 = d.norm_sq();
    if l2 == T::zero() {
        return a;
    }
    let t = ((p - a).dot(d) / l2).max(T::zero()).min(T::one());
    a + d * t
}

pub fn normalize_to_unit_support<T: Real>(
    query: Point2<T>,
    h: T,
    t: &Triangle<T>,
) -> Result<Triangle<T>, GeometryError> {
    let tf = Transform2::normalization(query, h)?;
    Ok(t.transformed(&tf))
}

/// Inside-or-on test against the unit circle using [`ON_CIRCLE_TOL`].
pub fn inside_unit_circle<T: Real>(p: Point2<T>) -> bool {
    p.norm() <= T::one() + T::lit(ON_CIRCLE_TOL)
}

pub fn near_unit_circle<T: Real>(p: Point2<T>) -> bool {
    (p.norm() - T::one()).abs() <= T::lit(ON_CIRCLE_TOL)
}
