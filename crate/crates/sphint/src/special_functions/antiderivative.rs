//! Antiderivatives of `x^p (1 − d²/x²)^(m/2)` and of `x^m · arcsec(a x)`.

use super::complex::{complex_acos, csqrt, re, C};
use super::hyp2f1::{hyp2f1_half, Half};
use super::SpecialFunctionError;
use crate::real::Real;

fn power_rule<T: Real>(p: i32, x: T) -> C<T> {
    if p == -1 {
        re(x.ln())
    } else {
        re(x.powi(p + 1) / T::from_i64((p + 1) as i64))
    }
}

/// Arguments this close to the branch point `x = |d|` are moved onto it.
///
/// The antiderivatives have a square-root branch point there, so a one-ulp offset (from
/// recomputing `d` or from an endpoint that lies on the circle `|x| = |d|` by construction)
/// would cost about `√ε` in each evaluation. The integrands built from them vanish or
/// cancel at that point, so the move itself is harmless.
pub(crate) fn snap_to_branch<T: Real>(x: T, ad: T) -> T {
    if (x - ad).abs() <= T::lit(64.0) * T::epsilon() * ad {
        ad
    } else {
        x
    }
}

fn binomial(n: i32, k: i32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// An antiderivative of `x^p (1 − d²/x²)^(m/2)` for `x > 0`.
///
/// Below `x = |d|` the integrand is imaginary; the returned function stays on the branch where
/// `√(x² − d²)/√(1 − x²/d²)` equals `−i|d|` for `x ≥ |d|`, so differences of evaluations at or
/// above `|d|` are real up to rounding.
pub fn sqrt_power_antiderivative<T: Real>(
    p: i32,
    m: i32,
    d: T,
    x: T,
) -> Result<C<T>, SpecialFunctionError> {
    if !(x > T::zero()) || !x.is_finite() || !d.is_finite() {
        return Err(SpecialFunctionError::Domain(format!(
            "antiderivative needs finite x > 0, got x = {x}"
        )));
    }
    if m == 0 || d == T::zero() {
        return Ok(power_rule(p, x));
    }
    let ad = d.abs();
    let x = snap_to_branch(x, ad);
    if m % 2 == 0 {
        if m < 0 {
            return Err(SpecialFunctionError::Unsupported { n: p, m });
        }
        let half = m / 2;
        let d2 = -(d * d);
        let mut acc = C::new(T::zero(), T::zero());
        for i in 0..=half {
            let w = T::from_i64(binomial(half, i)) * d2.powi(i);
            acc += power_rule(p - 2 * i, x) * w;
        }
        return Ok(acc);
    }
    let q = p - m + 1;
    if q > 0 {
        let ratio = if x >= ad {
            C::new(T::zero(), -ad)
        } else {
            C::new(T::zero(), ad)
        };
        let z = if x == ad { re(T::one()) } else { re((x / ad) * (x / ad)) };
        let f = hyp2f1_half(Half(-m), q as usize, z)?;
        return Ok(ratio.powi(m) * f * (x.powi(q) / T::from_i64(q as i64)));
    }
    if m >= 3 {
        // s^m = s^(m−2) (1 − d²/x²)
        let a = sqrt_power_antiderivative(p, m - 2, d, x)?;
        let b = sqrt_power_antiderivative(p - 2, m - 2, d, x)?;
        return Ok(a - b * (d * d));
    }
    let acos = complex_acos(re(ad / x));
    let root = csqrt(re(x * x - d * d));
    match (p, m) {
        (0, 1) => Ok(root - acos * ad),
        (-1, 1) => Ok((root + x).ln() - root / x),
        (-2, -1) => Ok(acos / ad),
        _ => Err(SpecialFunctionError::Unsupported { n: p, m }),
    }
}

/// `∫_lower^upper x^m · arcsec(a x) dx`, with `arcsec(u) = acos(1/u)` continued to `|u| < 1`.
pub fn arcsec_power_integral<T: Real>(
    a: T,
    m: i32,
    lower: T,
    upper: T,
) -> Result<C<T>, SpecialFunctionError> {
    if a == T::zero() {
        return Err(SpecialFunctionError::Domain("arcsec scale must be nonzero".into()));
    }
    if m < 0 {
        return Err(SpecialFunctionError::Domain(format!("negative power {m}")));
    }
    if !(lower <= upper) {
        return Err(SpecialFunctionError::Domain("bounds out of order".into()));
    }
    if lower == upper {
        return Ok(C::new(T::zero(), T::zero()));
    }
    let m1 = T::from_i64((m + 1) as i64);
    let d = a.recip();
    let phi = |x: T| -> Result<C<T>, SpecialFunctionError> {
        let x = snap_to_branch(x, d.abs());
        let ratio = if x == d.abs() { d.signum() } else { d / x };
        let asec = complex_acos(re(ratio));
        let j = sqrt_power_antiderivative(m - 1, -1, d, x)?;
        Ok(asec * (x.powi(m + 1) / m1) - j / (a * m1))
    };
    Ok(phi(upper)? - phi(lower)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn log_and_power_cases() {
        let l = sqrt_power_antiderivative(-1, 0, 0.5f64, 2.0).unwrap()
            - sqrt_power_antiderivative(-1, 0, 0.5f64, 1.0).unwrap();
        assert!((l.re - 2f64.ln()).abs() < 1e-15);
        let v = sqrt_power_antiderivative(2, 0, 0.3f64, 1.0).unwrap();
        assert!((v.re - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn definite_integral_n4_m3() {
        let f = |t: f64| {
            let x = 0.5 + t * t;
            2.0 * t * x.powi(4) * (1.0 - 0.25 / (x * x)).powf(1.5)
        };
        let want = simpson(f, 0.0, 0.5f64.sqrt(), 20_000);
        let got = sqrt_power_antiderivative(4, 3, 0.5f64, 1.0).unwrap()
            - sqrt_power_antiderivative(4, 3, 0.5f64, 0.5).unwrap();
        assert!((got.re - want).abs() < 1e-11, "{got} vs {want}");
        assert!(got.im.abs() < 1e-12);
    }

    #[test]
    fn derivative_matches_integrand() {
        for &(p, m) in &[(0, 1), (1, 1), (3, 1), (2, 2), (-1, -1), (4, -1), (5, 3), (0, 2), (-2, -1), (2, 3), (1, 3), (-1, 1)] {
            for &x in &[0.7f64, 0.95, 1.3] {
                let d = 0.6;
                let h = 1e-6;
                let fd = (sqrt_power_antiderivative(p, m, d, x + h).unwrap()
                    - sqrt_power_antiderivative(p, m, d, x - h).unwrap())
                    / (2.0 * h);
                let want = x.powi(p) * (1.0 - d * d / (x * x)).powf(m as f64 / 2.0);
                assert!((fd.re - want).abs() <= 1e-6 * want.abs().max(1.0), "p={p} m={m} x={x}");
            }
        }
    }

    #[test]
    fn arcsec_examples() {
        let v = arcsec_power_integral(1.0f64, 0, 1.0, 2.0).unwrap();
        let want = 2.0 * std::f64::consts::PI / 3.0 - (2.0 + 3f64.sqrt()).ln();
        assert!((v.re - want).abs() < 1e-13);
        let v = arcsec_power_integral(2.0f64, 3, 0.5, 1.0).unwrap();
        // x = 1/2 + t² removes the square-root endpoint behaviour
        let g = |t: f64| {
            let x = 0.5 + t * t;
            2.0 * t * x.powi(3) * (1.0 / (2.0 * x)).acos()
        };
        let want = simpson(g, 0.0, 0.5f64.sqrt(), 20_000);
        assert!((v.re - want).abs() < 1e-10);
        assert_eq!(arcsec_power_integral(2.0f64, 3, 0.7, 0.7).unwrap(), re(0.0));
        assert!(arcsec_power_integral(0.0f64, 1, 0.5, 1.0).is_err());
    }

    #[test]
    fn unsupported_family() {
        assert!(matches!(
            sqrt_power_antiderivative(-2, 1, 0.5f64, 1.0),
            Err(SpecialFunctionError::Unsupported { .. })
        ));
    }

    #[test]
    fn branch_point_endpoint_is_stable() {
        // reference values from 30-digit quadrature; the endpoint terms cancel to 1 part in 1500
        let d = 0.999f64;
        let got = arcsec_power_integral(1.0 / d, 0, d, 1.0).unwrap();
        assert!((got.re / 2.98216966958482122096822915651e-5 - 1.0).abs() < 1e-10);
        let got = arcsec_power_integral(1.0 / d, 2, d, 1.0).unwrap();
        assert!((got.re / 2.97978444506307841640068330467e-5 - 1.0).abs() < 1e-10);
    }
}
