//! Triangle ∩ unit disc assembled from fan triangles, arcs, segments and wedge differences.

use super::regions::Ctx;
use super::terms::Moments;
use crate::elementary_regions::RegionError;
use crate::geometry::{inside_unit_circle, line_circle_intersection, point_in_triangle, Point2, Triangle};
use crate::real::Real;

/// How a triangle in the unit-support frame is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// No overlap with the support.
    Empty,
    /// The triangle contains the whole support disc.
    FullDisc,
    /// A single edge cuts the disc.
    Segment,
    /// At most one vertex inside, general clipped boundary.
    Wedge,
    /// Two vertices inside.
    TwoInside,
    /// All vertices inside.
    ThreeInside,
}

/// Chords shorter than this whose ends both sit on the circle are tangential touches.
const TANGENT_CHORD: f64 = 1e-9;

/// A piece of a triangle edge inside the disc, in boundary order.
#[derive(Debug, Clone, Copy)]
struct Piece<T> {
    start: Point2<T>,
    end: Point2<T>,
}

fn on_circle<T: Real>(p: Point2<T>) -> bool {
    p.norm() >= T::one() - T::lit(TANGENT_CHORD)
}

fn clip_edges<T: Real>(v: &[Point2<T>; 3]) -> Vec<Piece<T>> {
    let mut out = Vec::with_capacity(3);
    for e in 0..3 {
        let (a, b) = (v[e], v[(e + 1) % 3]);
        let d = b - a;
        let Ok(hit) = line_circle_intersection(a, d, Point2::origin(), T::one()) else {
            continue;
        };
        if hit.count < 2 {
            continue;
        }
        let t0 = hit.lambda_n.max(T::zero());
        let t1 = hit.lambda_p.min(T::one());
        if !(t1 > t0) {
            continue;
        }
        let start = if t0 == T::zero() { a } else { a + d * t0 };
        let end = if t1 == T::one() { b } else { a + d * t1 };
        if (t1 - t0) * d.norm() < T::lit(TANGENT_CHORD) && on_circle(start) && on_circle(end) {
            continue;
        }
        out.push(Piece { start, end });
    }
    out
}

/// Counterclockwise angle from `a` to `b` in `[0, 2π)`; zero for coincident points.
fn ccw_angle<T: Real>(a: Point2<T>, b: Point2<T>) -> T {
    if (a - b).norm() <= T::lit(1e-13) {
        return T::zero();
    }
    let ang = a.cross(b).atan2(a.dot(b));
    if ang < T::zero() {
        ang + T::TAU()
    } else {
        ang
    }
}

fn wedge_branch<T: Real>(v: &[Point2<T>; 3], pieces: &[Piece<T>]) -> Branch {
    match pieces {
        [] => {
            let tri = Triangle::new(v[0], v[1], v[2]);
            if point_in_triangle(Point2::origin(), &tri) {
                Branch::FullDisc
            } else {
                Branch::Empty
            }
        }
        [p] if on_circle(p.start) && on_circle(p.end) => Branch::Segment,
        _ => Branch::Wedge,
    }
}

fn ccw<T: Real>(v: [Point2<T>; 3]) -> [Point2<T>; 3] {
    if (v[1] - v[0]).cross(v[2] - v[0]) < T::zero() {
        [v[0], v[2], v[1]]
    } else {
        v
    }
}

/// Branch taken for a triangle already in the unit-support frame.
pub fn classify<T: Real>(v: [Point2<T>; 3]) -> Branch {
    match v.iter().filter(|p| inside_unit_circle(**p)).count() {
        0 | 1 => {
            let v = ccw(v);
            wedge_branch(&v, &clip_edges(&v))
        }
        2 => Branch::TwoInside,
        _ => Branch::ThreeInside,
    }
}

impl<T: Real> Ctx<'_, T> {
    /// Triangle ∩ disc by walking the clipped boundary: every edge piece contributes its signed
    /// fan triangle and every arc between pieces a counterclockwise sector.
    pub fn wedge(&self, v0: Point2<T>, v1: Point2<T>, v2: Point2<T>) -> Result<Moments<T>, RegionError> {
        let v = ccw([v0, v1, v2]);
        let pieces = clip_edges(&v);
        match wedge_branch(&v, &pieces) {
            Branch::Empty => return Ok(Moments::zero()),
            Branch::FullDisc => return self.disc(T::one()),
            Branch::Segment => {
                let p = pieces[0];
                let centroid = (v[0] + v[1] + v[2]) * (T::one() / T::lit(3.0));
                return self.segment(p.start, p.end, centroid);
            }
            _ => {}
        }
        let mut acc = Moments::zero();
        for (i, p) in pieces.iter().enumerate() {
            let s = p.start.cross(p.end);
            if s != T::zero() {
                let g = self.fan(p.start, p.end)?;
                acc += if s > T::zero() { g } else { -g };
            }
            let next = pieces[(i + 1) % pieces.len()];
            let delta = ccw_angle(p.end, next.start);
            acc += self.sector_ccw(p.end, delta, T::one())?;
        }
        Ok(acc)
    }

    /// Two vertices (`v0`, `v1`) inside: extend `v0 → v1` beyond the disc and subtract.
    pub fn triangle2(&self, v0: Point2<T>, v1: Point2<T>, v2: Point2<T>) -> Result<Moments<T>, RegionError> {
        let x = extend(v0, v1);
        Ok(self.wedge(v0, x, v2)? - self.wedge(v1, x, v2)?)
    }

    /// All vertices inside.
    pub fn triangle3(&self, v0: Point2<T>, v1: Point2<T>, v2: Point2<T>) -> Result<Moments<T>, RegionError> {
        let x1 = extend(v0, v1);
        let x2 = extend(v0, v2);
        Ok(self.wedge(v0, x1, x2)? - self.triangle2(v1, v2, x1)? - self.wedge(v2, x1, x2)?)
    }

    /// Dispatch on the number of vertices inside the support, inside vertices first.
    pub fn dispatch(&self, v: [Point2<T>; 3], inside: [bool; 3]) -> Result<Moments<T>, RegionError> {
        let count = inside.iter().filter(|&&b| b).count();
        // cyclic rotation keeps the orientation
        let rot = |k: usize| [v[k % 3], v[(k + 1) % 3], v[(k + 2) % 3]];
        match count {
            0 | 1 => {
                let k = inside.iter().position(|&b| b).unwrap_or(0);
                let [a, b, c] = rot(k);
                self.wedge(a, b, c)
            }
            2 => {
                let k = (0..3).find(|&k| inside[k] && inside[(k + 1) % 3]).expect("two inside");
                let [a, b, c] = rot(k);
                self.triangle2(a, b, c)
            }
            _ => self.triangle3(v[0], v[1], v[2]),
        }
    }
}

/// `from + 3 (towards − from)/|towards − from|`, which leaves the unit disc when `from` is inside.
fn extend<T: Real>(from: Point2<T>, towards: Point2<T>) -> Point2<T> {
    let d = towards - from;
    let x = from + d * (T::lit(3.0) / d.norm());
    assert!(x.norm() > T::one(), "auxiliary vertex must leave the support");
    x
}
