use super::cone::cone_integral;
use super::{Family, FundamentalTerm, RegionError};
use crate::real::Real;
use crate::special_functions::{
    arcsec_power_integral, chebyshev_coefficients, sqrt_power_antiderivative, ChebyshevKind, C,
};

/// Integral over the part of the unit disc with `x ≥ d`.
///
/// At radius `r > |d|` the region spans `|θ| ≤ acos(d/r)`; for `d < 0` the inner disc `r < |d|`
/// is covered completely.
pub fn segment_integral<T: Real>(term: FundamentalTerm, d: T) -> Result<C<T>, RegionError> {
    if !d.is_finite() {
        return Err(RegionError::Domain(format!("chord offset {d}")));
    }
    let zero = C::new(T::zero(), T::zero());
    if d >= T::one() {
        return Ok(zero);
    }
    if d <= -T::one() {
        return Ok(cone_integral(term, T::zero(), T::TAU(), T::one()));
    }
    if term.family == Family::S {
        return Ok(zero);
    }
    if d.abs() <= T::lit(4.0) * T::epsilon() {
        let pi2 = T::FRAC_PI_2();
        return Ok(cone_integral(term, -pi2, pi2, T::one()));
    }
    let ad = d.abs();
    let n = term.n as i32;
    match term.family {
        Family::P => {
            let mut v = arcsec_power_integral(d.recip(), n, ad, T::one())? * T::lit(2.0);
            if d < T::zero() {
                v += C::new(
                    T::TAU() * ad.powi(n + 1) / T::from_i64(n as i64 + 1),
                    T::zero(),
                );
            }
            Ok(v)
        }
        Family::C => {
            // sin(a·acos y) = √(1 − y²) U_{a−1}(y) with y = d/r
            let a = term.harmonic as usize;
            let u = chebyshev_coefficients(ChebyshevKind::Second, a - 1);
            let mut acc = zero;
            for &(k, coef) in &u.coefficients {
                let p = n - k as i32;
                let span = sqrt_power_antiderivative(p, 1, d, T::one())?
                    - sqrt_power_antiderivative(p, 1, d, ad)?;
                acc += span * (T::from_i64(coef) * d.powi(k as i32));
            }
            Ok(acc * (T::lit(2.0) / T::from_i64(a as i64)))
        }
        Family::S => unreachable!(),
    }
}
