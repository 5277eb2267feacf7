//! Error of fixed-order quadrature against the known solution on the square tilings.
//!
//! The queries form a 3×3 grid with spacing 0.25 around the origin and `h = 0.75`, so every
//! support disc lies inside `[−1, 1]²`. There the exact value is the field itself and the
//! exact gradient is the field gradient.

use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use super::rules::{build_rule, quadrature_integrate, QuadratureError};
use crate::geometry::{Point2, Triangle};
use crate::kernels::PolyKernel;
use crate::mesh_io::{generate_square_triangulation, FieldSpec, FIELD_CHANNEL, GRID_NT8, GRID_NT96};
use crate::triangle_integrator::{IntegralResult, IntegrationError, TriangleIntegrator};

pub const CONVERGENCE_H: f64 = 0.75;
const QUERY_OFFSET: f64 = 0.25;

#[derive(Debug, Error)]
pub enum ConvergenceError {
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error("no tiling with {0} triangles (use 8 or 96)")]
    TriangleCount(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceCase {
    /// `f ≡ 1`
    Constant,
    /// `f(x, y) = x`
    Linear,
}

impl ConvergenceCase {
    pub fn field(self) -> FieldSpec {
        match self {
            Self::Constant => FieldSpec::Constant(1.0),
            Self::Linear => FieldSpec::Linear { a: 1.0, b: 0.0, c: 0.0 },
        }
    }
}

impl FromStr for ConvergenceCase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "constant" => Ok(Self::Constant),
            "linear" => Ok(Self::Linear),
            _ => Err(format!("unknown case `{s}` (constant | linear)")),
        }
    }
}

/// One line of a study. `order` is `None` for the closed-form result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub order: Option<usize>,
    pub points_per_triangle: usize,
    pub l2_value: f64,
    pub l2_gradient: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceStudy {
    pub case: ConvergenceCase,
    pub triangles: usize,
    pub analytic: ConvergenceRow,
    pub quadrature: Vec<ConvergenceRow>,
}

impl ConvergenceStudy {
    /// Running minimum of the quadrature errors, `(value, gradient)` per row.
    pub fn best_so_far(&self) -> Vec<(f64, f64)> {
        let mut best = (f64::INFINITY, f64::INFINITY);
        self.quadrature
            .iter()
            .map(|r| {
                best = (best.0.min(r.l2_value), best.1.min(r.l2_gradient));
                best
            })
            .collect()
    }

    /// Lowest quadrature error reached over the whole order range.
    pub fn plateau(&self) -> (f64, f64) {
        self.best_so_far().last().copied().unwrap_or((f64::INFINITY, f64::INFINITY))
    }
}

pub fn convergence_queries() -> Vec<Point2<f64>> {
    let s = [-QUERY_OFFSET, 0.0, QUERY_OFFSET];
    s.iter().flat_map(|&y| s.iter().map(move |&x| Point2::new(x, y))).collect()
}

pub fn convergence_mesh_triangles(case: ConvergenceCase, n_t: usize) -> Result<Vec<Triangle<f64>>, ConvergenceError> {
    let (nx, ny) = match n_t {
        8 => GRID_NT8,
        96 => GRID_NT96,
        n => return Err(ConvergenceError::TriangleCount(n)),
    };
    let mesh = generate_square_triangulation(nx, ny, case.field());
    Ok(mesh
        .field_triangles(Some(FIELD_CHANNEL))
        .expect("generated mesh carries its field"))
}

/// Root-mean-square value and gradient errors over the query grid.
fn l2_errors(
    field: FieldSpec,
    queries: &[Point2<f64>],
    eval: impl Fn(Point2<f64>) -> Result<IntegralResult<f64>, ConvergenceError> + Sync,
) -> Result<(f64, f64), ConvergenceError> {
    let g = field.gradient();
    let sq: Vec<(f64, f64)> = queries
        .par_iter()
        .map(|&q| {
            let r = eval(q)?;
            let ev = r.value - field.eval(q);
            let eg = (r.gradient[0] - g[0]).powi(2) + (r.gradient[1] - g[1]).powi(2);
            Ok((ev * ev, eg))
        })
        .collect::<Result<_, ConvergenceError>>()?;
    let n = queries.len() as f64;
    let (v, gr) = sq.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(((v / n).sqrt(), (gr / n).sqrt()))
}

pub fn convergence_study(
    case: ConvergenceCase,
    n_t: usize,
    orders: std::ops::RangeInclusive<usize>,
) -> Result<ConvergenceStudy, ConvergenceError> {
    let tris = convergence_mesh_triangles(case, n_t)?;
    let queries = convergence_queries();
    let field = case.field();
    let h = CONVERGENCE_H;

    let integrator = TriangleIntegrator::<f64>::wendland4();
    let (av, ag) = l2_errors(field, &queries, |q| {
        let mut acc = IntegralResult::zero();
        for t in &tris {
            acc += integrator.integrate_triangle(q, h, t)?;
        }
        Ok(acc)
    })?;
    let analytic = ConvergenceRow {
        order: None,
        points_per_triangle: 0,
        l2_value: av,
        l2_gradient: ag,
    };

    let kernel = PolyKernel::wendland4();
    let mut quadrature = Vec::new();
    for order in orders {
        let rule = build_rule(order)?;
        let (ev, eg) = l2_errors(field, &queries, |q| {
            let mut acc = IntegralResult::zero();
            for t in &tris {
                acc += quadrature_integrate(t, &rule, q, h, &kernel)?;
            }
            Ok(acc)
        })?;
        quadrature.push(ConvergenceRow {
            order: Some(order),
            points_per_triangle: rule.len(),
            l2_value: ev,
            l2_gradient: eg,
        });
    }
    Ok(ConvergenceStudy {
        case,
        triangles: tris.len(),
        analytic,
        quadrature,
    })
}
