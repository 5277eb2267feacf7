use thiserror::Error;

use crate::geometry::{Point2, Triangle};
use crate::kernels::PolyKernel;
use crate::triangle_integrator::IntegralResult;

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 50;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("no rule of order {0} (supported: {MIN_ORDER}..={MAX_ORDER})")]
    UnsupportedOrder(usize),
    #[error("support radius must be positive, got {0}")]
    NonPositiveSupport(f64),
    #[error("tolerance {0} is below the supported floor 1e-13")]
    ToleranceTooSmall(f64),
    #[error("adaptive integration did not converge (estimate {estimate:?}, error {error:e})")]
    NotConverged {
        estimate: IntegralResult<f64>,
        error: f64,
    },
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi's initial guess, then Newton on P_n
        let mut x = ((4 * i + 3) as f64 * std::f64::consts::PI / (4 * n + 2) as f64).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out.reverse();
    out
}

/// Area-normalized rule on the reference triangle, nodes given barycentrically.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub order: usize,
    pub nodes: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Collapsed-square product rule exact for total degree `order`.
///
/// With `x = u`, `y = (1 − u) v` the Jacobian `1 − u` raises the degree in `u` by one, so
/// `⌈(order + 2)/2⌉` Gauss points per direction suffice. All weights are positive.
pub fn build_rule(order: usize) -> Result<QuadratureRule, QuadratureError> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(QuadratureError::UnsupportedOrder(order));
    }
    let m = (order + 3) / 2;
    let gl = gauss_legendre(m);
    let mut nodes = Vec::with_capacity(m * m);
    let mut weights = Vec::with_capacity(m * m);
    for &(u, wu) in &gl {
        for &(v, wv) in &gl {
            let x = u;
            let y = (1.0 - u) * v;
            nodes.push([1.0 - x - y, x, y]);
            // reference area 1/2 normalized away
            weights.push(2.0 * wu * wv * (1.0 - u));
        }
    }
    Ok(QuadratureRule {
        order,
        nodes,
        weights,
    })
}

/// Rule applied to the whole triangle with the kernel cutoff as the only treatment of the
/// support boundary.
pub fn quadrature_integrate(
    t: &Triangle<f64>,
    rule: &QuadratureRule,
    query: Point2<f64>,
    h: f64,
    kernel: &PolyKernel<f64>,
) -> Result<IntegralResult<f64>, QuadratureError> {
    if !(h > 0.0) {
        return Err(QuadratureError::NonPositiveSupport(h));
    }
    let area = t.signed_area().abs();
    let values = t.values.unwrap_or([1.0; 3]);
    let norm = kernel.c2 / (h * h);
    let gnorm = kernel.c2 / (h * h * h);
    let mut out = IntegralResult::zero();
    for (b, &w) in rule.nodes.iter().zip(&rule.weights) {
        let p = t.v[0] * b[0] + t.v[1] * b[1] + t.v[2] * b[2];
        let a = values[0] * b[0] + values[1] * b[1] + values[2] * b[2];
        let d = query - p;
        let r = d.norm();
        let q = r / h;
        if q >= 1.0 {
            continue;
        }
        let wa = w * area * a;
        out.value += wa * norm * kernel.shape(q);
        if r > 0.0 {
            let dk = kernel.shape_derivative(q) * gnorm / r;
            out.gradient[0] += wa * dk * d.x;
            out.gradient[1] += wa * dk * d.y;
        }
    }
    Ok(out)
}
