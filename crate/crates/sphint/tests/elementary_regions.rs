use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphint::elementary_regions::{
    cone_integral, segment_integral, stub_integral, DiscTable, Family, FundamentalTerm, MAX_HARMONIC,
};
use sphint::kernels::PolyKernel;
use sphint::quadrature_oracle::gauss_legendre;

/// `∫_a^b ang(θ) dθ`.
fn angular(term: FundamentalTerm, a: f64, b: f64) -> f64 {
    cone_integral(term, a, b, 1.0).re * (term.n as f64 + 1.0)
}

/// `∫_lo^hi r^n Θ(r) dr` with `r = lo + (hi − lo) t²`, which smooths the square-root
/// behaviour of the angular limits at `lo`.
fn radial(n: u32, lo: f64, hi: f64, theta: impl Fn(f64) -> f64) -> f64 {
    // nodes on [0, 1]
    let gl = gauss_legendre(40);
    let panels = 16;
    let mut acc = 0.0;
    for k in 0..panels {
        let (t0, t1) = (k as f64 / panels as f64, (k + 1) as f64 / panels as f64);
        for &(x, w) in &gl {
            let t = t0 + (t1 - t0) * x;
            let r = lo + (hi - lo) * t * t;
            let jac = 2.0 * (hi - lo) * t * (t1 - t0);
            acc += w * jac * r.powi(n as i32) * theta(r);
        }
    }
    acc
}

/// Every term the Wendland kernel needs: powers up to degree + 2, harmonics up to two.
fn kernel_terms() -> Vec<FundamentalTerm> {
    let top = PolyKernel::<f64>::wendland4().degree() as u32 + 2;
    let mut out = Vec::new();
    for n in 0..=top {
        out.push(FundamentalTerm::p(n));
        for a in 1..=MAX_HARMONIC {
            out.push(FundamentalTerm::c(n, a));
            out.push(FundamentalTerm::s(n, a));
        }
    }
    out
}

fn stub_reference(term: FundamentalTerm, l: f64, beta: f64, lo: f64, hi: f64) -> (f64, f64) {
    let dist = l * beta.sin();
    let omega = |r: f64| ((dist / r).min(1.0).asin() - beta).max(0.0);
    let value = radial(term.n, lo, hi, |r| angular(term, 0.0, omega(r)));
    let size = radial(term.n, lo, hi, omega);
    (value, size)
}

fn segment_reference(term: FundamentalTerm, d: f64) -> (f64, f64) {
    let half = |r: f64| (d / r).clamp(-1.0, 1.0).acos();
    let mut value = radial(term.n, d.abs(), 1.0, |r| angular(term, -half(r), half(r)));
    let mut size = radial(term.n, d.abs(), 1.0, |r| 2.0 * half(r));
    if d < 0.0 {
        value += cone_integral(term, 0.0, 2.0 * PI, -d).re;
        size += 2.0 * PI * (-d).powi(term.n as i32 + 1) / (term.n as f64 + 1.0);
    }
    (value, size)
}

#[test]
fn stubs_match_polar_quadrature() {
    let terms = kernel_terms();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..1000 {
        let term = terms[i % terms.len()];
        let l = rng.gen_range(0.05..1.0);
        let beta = rng.gen_range(0.0..1.55);
        let dist = l * f64::sin(beta);
        let (mut lo, mut hi) = (rng.gen_range(dist..l), rng.gen_range(dist..l));
        if i % 3 == 0 {
            lo = dist;
        }
        if lo > hi {
            std::mem::swap(&mut lo, &mut hi);
        }
        let got = stub_integral(term, l, beta, lo, hi).unwrap();
        let (want, size) = stub_reference(term, l, beta, lo, hi);
        let tol = 1e-9 * want.abs().max(size);
        assert!((got.re - want).abs() <= tol, "{term:?} l={l} β={beta} [{lo}, {hi}]: {} vs {want}", got.re);
        assert!(got.im.abs() <= tol.max(1e-13), "{term:?}: im {}", got.im);
    }
}

#[test]
fn segments_match_polar_quadrature() {
    let terms = kernel_terms();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..1000 {
        let term = terms[i % terms.len()];
        let d = rng.gen_range(-1.0..1.0);
        let got = segment_integral(term, d).unwrap();
        let (want, size) = segment_reference(term, d);
        let tol = 1e-9 * want.abs().max(size);
        assert!((got.re - want).abs() <= tol, "{term:?} d={d}: {} vs {want}", got.re);
        assert!(got.im.abs() <= tol.max(1e-13), "{term:?} d={d}: im {}", got.im);
    }
}

#[test]
fn stub_radial_additivity_on_random_splits() {
    let terms = kernel_terms();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..500 {
        let term = terms[i % terms.len()];
        let l = rng.gen_range(0.1..1.0);
        let beta = rng.gen_range(0.01..1.5);
        let dist = l * f64::sin(beta);
        let mid = rng.gen_range(dist..l);
        let whole = stub_integral(term, l, beta, dist, l).unwrap();
        let parts = stub_integral(term, l, beta, dist, mid).unwrap() + stub_integral(term, l, beta, mid, l).unwrap();
        assert!((whole - parts).norm() <= 1e-12, "{term:?} l={l} β={beta}");
    }
}

#[test]
fn stub_area_matches_geometry() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let l: f64 = rng.gen_range(0.05..1.0);
        let beta: f64 = rng.gen_range(0.0..1.5);
        let dist = l * beta.sin();
        // triangle (origin, far vertex, foot of the perpendicular) minus the sector under it
        let want = 0.5 * l * beta.cos() * dist - 0.5 * (FRAC_PI_2 - beta) * dist * dist;
        let got = stub_integral(FundamentalTerm::p(1), l, beta, dist, l).unwrap();
        assert!((got.re - want).abs() <= 1e-14, "l={l} β={beta}");
    }
}

#[test]
fn region_argument_checks() {
    let t = FundamentalTerm::p(2);
    assert!(stub_integral(t, 0.5, FRAC_PI_2, 0.5, 0.5).is_err());
    assert!(stub_integral(t, 0.5, -0.1, 0.4, 0.5).is_err());
    assert!(stub_integral(t, 0.5, 0.3, 0.5, 0.4).is_err());
    assert!(segment_integral(t, f64::NAN).is_err());
    assert_eq!(segment_integral(t, 1.5).unwrap().norm(), 0.0);
    let full = segment_integral(t, -1.5).unwrap();
    assert!((full.re - 2.0 * PI / 3.0).abs() < 1e-15);
}

#[test]
fn disc_table_agrees_with_direct_regions() {
    let top = PolyKernel::<f64>::wendland4().degree() as u32 + 2;
    let table = DiscTable::<f64>::new(top);
    for term in kernel_terms() {
        let full = cone_integral(term, 0.0, 2.0 * PI, 0.7);
        assert!((table.full(term, 0.7) - full).norm() <= 1e-15);
        let half = segment_integral(term, 0.0).unwrap();
        assert!((table.half(term) - half).norm() <= 1e-14, "{term:?}");
        if term.family != Family::P {
            assert!(table.full(term, 1.0).norm() <= 1e-15);
        }
    }
}
