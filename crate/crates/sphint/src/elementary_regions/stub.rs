use super::{Family, FundamentalTerm, RegionError};
use crate::real::Real;
use crate::special_functions::{
    arcsec_power_integral, chebyshev_coefficients, sqrt_power_antiderivative, ChebyshevKind, C,
};

/// Radial part of a stub: `∫_lower^upper ∫_0^{ω(r)} f dθ dr` with `ω(r) = asin(D/r) − β`.
///
/// The stub has the origin, a far vertex at `(l, 0)` and an edge leaving it at interior angle `β`
/// towards the upper half plane; `D = l sin β` is the distance from the origin to that edge.
/// Radii must satisfy `D ≤ lower ≤ upper`.
pub fn stub_integral<T: Real>(
    term: FundamentalTerm,
    l: T,
    beta: T,
    lower: T,
    upper: T,
) -> Result<C<T>, RegionError> {
    if !(beta >= T::zero() && beta < T::FRAC_PI_2()) {
        return Err(RegionError::Domain(format!("stub angle {beta} outside [0, π/2)")));
    }
    if !(lower <= upper) || !(lower > T::zero()) {
        return Err(RegionError::Domain(format!("stub radii [{lower}, {upper}]")));
    }
    let zero = C::new(T::zero(), T::zero());
    let dist = l * beta.sin();
    if beta == T::zero() || dist <= T::zero() || lower == upper {
        return Ok(zero);
    }
    // radii below the foot of the perpendicular only appear through rounding
    let lower = lower.max(dist);
    let upper = upper.max(lower);
    let n = term.n as i32;
    let n1 = T::from_i64(n as i64 + 1);
    let power_span = (upper.powi(n + 1) - lower.powi(n + 1)) / n1;
    let span = |p: i32, m: i32| -> Result<C<T>, RegionError> {
        Ok(sqrt_power_antiderivative(p, m, dist, upper)?
            - sqrt_power_antiderivative(p, m, dist, lower)?)
    };
    // Σ coef_j ∫ r^p s^j with s = √(1 − D²/r²)
    let series = |kind: ChebyshevKind, deg: usize, p: i32| -> Result<C<T>, RegionError> {
        let mut acc = zero;
        for &(j, coef) in &chebyshev_coefficients(kind, deg).coefficients {
            acc += span(p, j as i32)? * T::from_i64(coef);
        }
        Ok(acc)
    };
    match term.family {
        Family::P => {
            let asin_part = arcsec_power_integral(dist.recip(), n, lower, upper)?;
            Ok(C::new((T::FRAC_PI_2() - beta) * power_span, T::zero()) - asin_part)
        }
        Family::C => {
            // sin(a(φ − β)) with sin(aφ) = (D/r) U_{a−1}(s), cos(aφ) = T_a(s)
            let a = term.harmonic;
            let ab = T::from_i64(a as i64) * beta;
            let u = series(ChebyshevKind::Second, a as usize - 1, n - 1)?;
            let t = series(ChebyshevKind::First, a as usize, n)?;
            Ok((u * (ab.cos() * dist) - t * ab.sin()) / T::from_i64(a as i64))
        }
        Family::S => {
            let b = term.harmonic;
            let bb = T::from_i64(b as i64) * beta;
            let u = series(ChebyshevKind::Second, b as usize - 1, n - 1)?;
            let t = series(ChebyshevKind::First, b as usize, n)?;
            let v = C::new(power_span, T::zero()) - t * bb.cos() - u * (bb.sin() * dist);
            Ok(v / T::from_i64(b as i64))
        }
    }
}
