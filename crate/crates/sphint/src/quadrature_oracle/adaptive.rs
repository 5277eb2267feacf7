use super::rules::{gauss_legendre, QuadratureError};
use crate::geometry::{barycentric, Point2, Triangle};
use crate::kernels::PolyKernel;
use crate::triangle_integrator::IntegralResult;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const CELL_BUDGET: usize = 1_000_000;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

type Triple = [f64; 3];

fn axpy(acc: &mut Triple, w: f64, v: Triple) {
    for i in 0..3 {
        acc[i] += w * v[i];
    }
}

/// 15-point Kronrod estimate and its difference from the embedded 7-point Gauss rule.
fn kronrod(f: &impl Fn(f64) -> Triple, a: f64, b: f64) -> (Triple, f64) {
    let c = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let mut k = [0.0; 3];
    let mut g = [0.0; 3];
    for (i, (&x, &w)) in XGK.iter().zip(&WGK).enumerate() {
        let pts: &[f64] = if x == 0.0 { &[0.0] } else { &[-1.0, 1.0] };
        for &s in pts {
            let v = f(c + s * hl * x);
            axpy(&mut k, w * hl, v);
            if i % 2 == 1 {
                axpy(&mut g, WG[i / 2] * hl, v);
            }
        }
    }
    let err = (0..3).map(|i| (k[i] - g[i]).abs()).fold(0.0, f64::max);
    (k, err)
}

struct Cell {
    a: f64,
    b: f64,
    est: Triple,
    err: f64,
}

/// Globally adaptive Gauss–Kronrod over the given breakpoints.
fn integrate_1d(
    f: impl Fn(f64) -> Triple,
    breaks: &[f64],
    tol: f64,
    budget: &mut usize,
) -> Result<Triple, (Triple, f64)> {
    let mut cells: Vec<Cell> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let (est, err) = kronrod(&f, w[0], w[1]);
            Cell { a: w[0], b: w[1], est, err }
        })
        .collect();
    loop {
        let total_err: f64 = cells.iter().map(|c| c.err).sum();
        let mut total = [0.0; 3];
        for c in &cells {
            axpy(&mut total, 1.0, c.est);
        }
        if total_err <= tol {
            return Ok(total);
        }
        if *budget == 0 {
            return Err((total, total_err));
        }
        let (worst, _) = cells
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("nonempty");
        let c = cells.swap_remove(worst);
        let m = 0.5 * (c.a + c.b);
        if !(m > c.a && m < c.b) {
            // interval exhausted at machine precision; accept what we have
            cells.push(Cell { err: 0.0, ..c });
            continue;
        }
        for (a, b) in [(c.a, m), (m, c.b)] {
            let (est, err) = kronrod(&f, a, b);
            cells.push(Cell { a, b, est, err });
        }
        *budget = budget.saturating_sub(2);
    }
}

/// Parameters in `(0, 1)` where `|a + t (b − a)| = 1`.
fn circle_crossings(a: Point2<f64>, b: Point2<f64>) -> Vec<f64> {
    let d = b - a;
    let qa = d.norm_sq();
    let qb = 2.0 * a.dot(d);
    let qc = a.norm_sq() - 1.0;
    let disc = qb * qb - 4.0 * qa * qc;
    if qa == 0.0 || disc <= 0.0 {
        return vec![];
    }
    let s = disc.sqrt();
    // numerically stable pair of roots
    let q = -0.5 * (qb + qb.signum() * s);
    let mut r = vec![q / qa, if q != 0.0 { qc / q } else { -qb / (2.0 * qa) }];
    r.retain(|t| *t > 0.0 && *t < 1.0);
    r.sort_by(f64::total_cmp);
    r
}

/// High-accuracy reference for the value and query gradient over one triangle.
///
/// The triangle is split into signed fans at the query. Along each ray the integrand is a
/// polynomial inside the support, so the radial integral is exact with 8 Gauss points; the
/// remaining integral along the edge is adaptive and broken where the edge crosses the support
/// circle.
pub fn adaptive_clipped_integrate(
    t: &Triangle<f64>,
    query: Point2<f64>,
    h: f64,
    kernel: &PolyKernel<f64>,
    tol: f64,
) -> Result<IntegralResult<f64>, QuadratureError> {
    if !(h > 0.0) {
        return Err(QuadratureError::NonPositiveSupport(h));
    }
    if !(tol >= 1e-13) {
        return Err(QuadratureError::ToleranceTooSmall(tol));
    }
    let t = &t.oriented_ccw();
    if t.signed_area() == 0.0 {
        return Ok(IntegralResult::zero());
    }
    let values = t.values.unwrap_or([1.0; 3]);
    let unit = t.v.map(|p| (p - query) * h.recip());
    let field = |u: Point2<f64>| -> f64 {
        match barycentric(query + u * h, t) {
            Some(b) => b[0] * values[0] + b[1] * values[1] + b[2] * values[2],
            None => 0.0,
        }
    };
    let gl = gauss_legendre(8);
    let mut budget = CELL_BUDGET;
    let mut total = [0.0; 3];
    let mut total_err = 0.0;
    let mut failed = false;
    for i in 0..3 {
        let (a, b) = (unit[i], unit[(i + 1) % 3]);
        let cross = a.cross(b);
        if cross == 0.0 {
            continue;
        }
        let fan = |s_t: f64| -> Triple {
            let e = a + (b - a) * s_t;
            let len = e.norm();
            if len == 0.0 {
                return [0.0; 3];
            }
            let smax = len.recip().min(1.0);
            let dir = e * len.recip();
            let mut acc = [0.0; 3];
            for &(x, w) in &gl {
                let s = smax * x;
                let r = s * len;
                let wa = w * smax * s * field(e * s);
                acc[0] += wa * kernel.shape(r);
                let dk = -kernel.shape_derivative(r);
                acc[1] += wa * dk * dir.x;
                acc[2] += wa * dk * dir.y;
            }
            acc.map(|v| v * cross)
        };
        let mut breaks = vec![0.0];
        breaks.extend(circle_crossings(a, b));
        breaks.push(1.0);
        match integrate_1d(fan, &breaks, tol / 3.0, &mut budget) {
            Ok(v) => axpy(&mut total, 1.0, v),
            Err((v, e)) => {
                axpy(&mut total, 1.0, v);
                total_err += e;
                failed = true;
            }
        }
    }
    let result = IntegralResult {
        value: kernel.c2 * total[0],
        gradient: [kernel.c2 / h * total[1], kernel.c2 / h * total[2]],
        imag_residual: 0.0,
    };
    if failed {
        return Err(QuadratureError::NotConverged {
            estimate: result,
            error: total_err,
        });
    }
    Ok(result)
}
