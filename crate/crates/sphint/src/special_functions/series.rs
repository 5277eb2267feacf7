//! Central-binomial series factors and the arcsine series `F`.

use super::complex::{complex_asin, csqrt, C};
use super::SpecialFunctionError;
use crate::real::Real;

/// `S(n) = C(2n, n) / (2 · 4^n)`.
pub fn series_s<T: Real>(n: usize) -> T {
    // running product keeps the value representable for large n
    let mut s = 0.5f64;
    for i in 1..=n {
        s *= (2 * i - 1) as f64 / (2 * i) as f64;
    }
    T::lit(s)
}

/// `T(n) = 1 / ((2n + 1) S(n))`.
pub fn series_t<T: Real>(n: usize) -> T {
    T::one() / (T::lit((2 * n + 1) as f64) * series_s::<T>(n))
}

/// `Σ_{i<k} T(i) c^(i+1)` by Horner's scheme.
pub(crate) fn t_polynomial<T: Real>(k: usize, c: C<T>) -> C<T> {
    let mut acc = C::new(T::zero(), T::zero());
    for i in (0..k).rev() {
        acc = acc * c + series_t::<T>(i);
    }
    acc * c
}

/// `F(n, c) = 2 √c asin(√c) / √(1 − c) − Σ_{i<n/2} T(i) c^(i+1)`.
///
/// The closed form is the analytic continuation of the tail `Σ_{i≥n/2} T(i) c^(i+1)`.
pub fn series_f<T: Real>(n: usize, c: C<T>) -> Result<C<T>, SpecialFunctionError> {
    if n % 2 != 0 {
        return Err(SpecialFunctionError::Parity { n, even: true });
    }
    let one_minus = C::new(T::one(), T::zero()) - c;
    if one_minus.norm() == T::zero() {
        return Err(SpecialFunctionError::Singular);
    }
    let sc = csqrt(c);
    let head = sc * complex_asin(sc) * T::lit(2.0) / csqrt(one_minus);
    Ok(head - t_polynomial(n / 2, c))
}

/// Sums `Σ_{j≥0} coef(j) c^j` until the terms stop mattering.
pub(crate) fn power_tail<T: Real>(c: C<T>, coef: impl Fn(usize) -> T) -> C<T> {
    let mut sum = C::new(T::zero(), T::zero());
    let mut pw = C::new(T::one(), T::zero());
    let mut quiet = 0;
    for j in 0..20_000 {
        let term = pw * coef(j);
        sum += term;
        if term.norm() <= T::epsilon() * T::lit(0.01) * sum.norm() {
            quiet += 1;
            if quiet > 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        pw *= c;
    }
    sum
}
