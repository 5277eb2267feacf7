//! Complex elementary functions with the branch conventions used by the antiderivatives.
//!
//! Real arguments sitting on a branch cut are read from the side where `sqrt(-x) = +i sqrt(x)`;
//! `asin` is extended oddly so that `asin(-z) = -asin(z)` holds on the cuts as well.

use num_complex::Complex;

use crate::real::Real;

pub type C<T> = Complex<T>;

#[inline]
pub fn re<T: Real>(x: T) -> C<T> {
    C::new(x, T::zero())
}

/// Principal square root, with negative reals mapped to the positive imaginary axis.
pub fn csqrt<T: Real>(z: C<T>) -> C<T> {
    if z.im == T::zero() {
        if z.re >= T::zero() {
            return re(z.re.sqrt());
        }
        return C::new(T::zero(), (-z.re).sqrt());
    }
    z.sqrt()
}

/// `z^(k/2)` built from [`csqrt`] so half-integer powers share its branch.
pub fn cpow_half<T: Real>(z: C<T>, k: i32) -> C<T> {
    let whole = z.powi(k.div_euclid(2));
    if k.rem_euclid(2) == 1 {
        whole * csqrt(z)
    } else {
        whole
    }
}

/// Inverse sine with the odd extension across both real cuts.
pub fn complex_asin<T: Real>(z: C<T>) -> C<T> {
    if z.im == T::zero() {
        let x = z.re;
        if x.abs() <= T::one() {
            return re(x.asin());
        }
        let s = x.signum();
        return C::new(s * T::FRAC_PI_2(), -s * x.abs().acosh());
    }
    // keep exact oddness by always evaluating in the closed right half plane
    let flip = z.re < T::zero() || (z.re == T::zero() && z.im < T::zero());
    let w = if flip { -z } else { z };
    let i = C::new(T::zero(), T::one());
    let v = -i * (i * w + (re(T::one()) - w * w).sqrt()).ln();
    if flip {
        -v
    } else {
        v
    }
}

pub fn complex_acos<T: Real>(z: C<T>) -> C<T> {
    re(T::FRAC_PI_2()) - complex_asin(z)
}

#[inline]
pub fn cabs_max<T: Real>(vals: &[C<T>]) -> T {
    vals.iter().fold(T::zero(), |m, v| m.max(v.im.abs()))
}
