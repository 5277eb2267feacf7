//! The Gauss hypergeometric family `₂F₁(a, b; b+1; z)` with half-integer `a`.
//!
//! Everything needed by the square-root antiderivatives reduces to two anchor families,
//! `a = −1/2` and `a = +1/2`, each split by the parity of `n = 2b`; other values of `a` are
//! reached with contiguous relations.

use super::complex::{complex_asin, cpow_half, csqrt, re, C};
use super::series::{power_tail, series_s, series_t, t_polynomial};
use super::SpecialFunctionError;
use crate::real::Real;

/// Below this modulus the anchors are summed as convergent tails instead of closed forms,
/// which would otherwise cancel catastrophically.
pub const TAIL_SERIES_RADIUS: f64 = 0.9;

/// Exact half-integer `num / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Half(pub i32);

impl Half {
    pub fn int(v: i32) -> Self {
        Half(2 * v)
    }

    pub fn value<T: Real>(self) -> T {
        T::lit(self.0 as f64 * 0.5)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::Add<i32> for Half {
    type Output = Half;
    fn add(self, k: i32) -> Half {
        Half(self.0 + 2 * k)
    }
}

impl std::ops::Sub<i32> for Half {
    type Output = Half;
    fn sub(self, k: i32) -> Half {
        Half(self.0 - 2 * k)
    }
}

fn one<T: Real>() -> C<T> {
    re(T::one())
}

/// Closed-form special values; `None` when no pattern applies.
pub fn hyp2f1_special<T: Real>(a: Half, b: Half, c: Half, z: C<T>) -> Option<C<T>> {
    if z == C::new(T::zero(), T::zero()) || a.is_zero() || b.is_zero() {
        return Some(one());
    }
    let cv = c.value::<T>();
    if a == Half::int(-1) {
        return Some((re(cv) - z * b.value::<T>()) / cv);
    }
    if b == Half::int(-1) {
        return Some((re(cv) - z * a.value::<T>()) / cv);
    }
    if b == c {
        return Some(cpow_half(one::<T>() - z, -a.0));
    }
    if a == c {
        return Some(cpow_half(one::<T>() - z, -b.0));
    }
    None
}

/// Direct Gauss series, only meaningful for `|z| < 1`; used as a reference.
pub fn hyp2f1_series<T: Real>(a: T, b: T, c: T, z: C<T>, max_terms: usize) -> C<T> {
    let mut term = one::<T>();
    let mut sum = one::<T>();
    for k in 0..max_terms {
        let kf = T::lit(k as f64);
        term = term * ((a + kf) * (b + kf) / ((c + kf) * (kf + T::one()))) * z;
        sum += term;
        if term.norm() <= T::epsilon() * T::lit(1e-3) * sum.norm() && k > 4 {
            break;
        }
    }
    sum
}

fn use_tail<T: Real>(c: C<T>) -> bool {
    c.norm() <= T::lit(TAIL_SERIES_RADIUS)
}

fn check_anchor<T: Real>(n: usize, odd: bool, c: C<T>) -> Result<(), SpecialFunctionError> {
    if (n % 2 == 1) != odd {
        return Err(SpecialFunctionError::Parity { n, even: !odd });
    }
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(SpecialFunctionError::Domain("non-finite argument".into()));
    }
    Ok(())
}

/// `₂F₁(−1/2, n/2; n/2 + 1; c)` for odd `n`.
pub fn hyp2f1_odd<T: Real>(n: usize, c: C<T>) -> Result<C<T>, SpecialFunctionError> {
    check_anchor(n, true, c)?;
    if c.norm() == T::zero() {
        return Ok(one());
    }
    let k = (n + 1) / 2;
    let s = series_s::<T>(k);
    let s1 = csqrt(one::<T>() - c);
    if use_tail(c) {
        let tail = power_tail(c, |j| series_t::<T>(k + j));
        return Ok(s1 * (one::<T>() + c * tail * s));
    }
    let sc = csqrt(c);
    let inv = c.inv();
    let scaled = t_polynomial(k, c) * inv.powi(k as i32);
    Ok(s1 + (sc * complex_asin(sc) * inv.powi(k as i32) * T::lit(2.0) - s1 * scaled) * s)
}

/// `₂F₁(−1/2, n/2; n/2 + 1; c)` for even `n`.
pub fn hyp2f1_even<T: Real>(n: usize, c: C<T>) -> Result<C<T>, SpecialFunctionError> {
    check_anchor(n, false, c)?;
    if n == 0 || c.norm() == T::zero() {
        return Ok(one());
    }
    let j = n / 2;
    // j·B(j, 3/2) = Π 2i/(2i+1)
    let pref = (1..=j).fold(T::one(), |p, i| {
        p * T::lit((2 * i) as f64) / T::lit((2 * i + 1) as f64)
    });
    let om = one::<T>() - c;
    let om32 = om * csqrt(om);
    let coef = |i: usize| T::lit((2 * (2 * i + 1)) as f64) * series_s::<T>(i);
    let g = if use_tail(c) {
        om32 * power_tail(c, |i| coef(j + i))
    } else {
        let inv = c.inv();
        let mut poly = C::new(T::zero(), T::zero());
        for i in (0..j).rev() {
            poly = poly * c + coef(i);
        }
        inv.powi(j as i32) - om32 * poly * inv.powi(j as i32)
    };
    Ok(g * pref)
}

/// `₂F₁(1/2, n/2; n/2 + 1; c)` for odd `n`.
pub fn hyp2f1_odd_recip<T: Real>(n: usize, c: C<T>) -> Result<C<T>, SpecialFunctionError> {
    check_anchor(n, true, c)?;
    if c.norm() == T::zero() {
        return Ok(one());
    }
    let j = (n - 1) / 2;
    let pref = T::lit((2 * j + 1) as f64) * series_s::<T>(j);
    let s1 = csqrt(one::<T>() - c);
    if use_tail(c) {
        return Ok(s1 * power_tail(c, |i| series_t::<T>(j + i)) * pref);
    }
    let sc = csqrt(c);
    let inv = c.inv();
    let head = sc * complex_asin(sc) * inv.powi(j as i32 + 1) * T::lit(2.0);
    let poly = if j == 0 {
        C::new(T::zero(), T::zero())
    } else {
        t_polynomial(j, c) * inv.powi(j as i32 + 1)
    };
    Ok((head - s1 * poly) * pref)
}

/// `₂F₁(1/2, n/2; n/2 + 1; c)` for even `n`.
pub fn hyp2f1_even_recip<T: Real>(n: usize, c: C<T>) -> Result<C<T>, SpecialFunctionError> {
    check_anchor(n, false, c)?;
    if n == 0 || c.norm() == T::zero() {
        return Ok(one());
    }
    let j = n / 2;
    // j·B(j, 1/2) = Π 2i/(2i−1)
    let pref = (1..=j).fold(T::one(), |p, i| {
        p * T::lit((2 * i) as f64) / T::lit((2 * i - 1) as f64)
    });
    let s1 = csqrt(one::<T>() - c);
    let coef = |i: usize| series_s::<T>(i) * T::lit(2.0);
    let g = if use_tail(c) {
        s1 * power_tail(c, |i| coef(j + i))
    } else {
        let inv = c.inv();
        let mut poly = C::new(T::zero(), T::zero());
        for i in (0..j).rev() {
            poly = poly * c + coef(i);
        }
        inv.powi(j as i32) - s1 * poly * inv.powi(j as i32)
    };
    Ok(g * pref)
}

/// Which neighbour of `₂F₁(a, b; c; z)` a contiguous relation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighbor {
    APlus,
    BPlus,
    CMinus,
}

/// Applies `(c−1)(F(c−1) − F) = b(F(b+1) − F) = a(F(a+1) − F)` to obtain the `want`
/// neighbour from the centre value and one known neighbour.
pub fn hyp2f1_contiguous_step<T: Real>(
    a: Half,
    b: Half,
    c: Half,
    center: C<T>,
    known: (Neighbor, C<T>),
    want: Neighbor,
) -> Result<C<T>, SpecialFunctionError> {
    let coef = |nb: Neighbor| -> T {
        match nb {
            Neighbor::APlus => a.value(),
            Neighbor::BPlus => b.value(),
            Neighbor::CMinus => (c - 1).value(),
        }
    };
    let pivot = coef(want);
    if pivot == T::zero() {
        return Err(SpecialFunctionError::PivotVanishes);
    }
    let common = (known.1 - center) * coef(known.0);
    Ok(center + common / pivot)
}

/// Three-term recurrence in `a`: returns `F(a−1)` from `F(a)` and `F(a+1)`.
pub fn hyp2f1_step_a_down<T: Real>(
    a: Half,
    b: Half,
    c: Half,
    z: C<T>,
    f_a: C<T>,
    f_a_plus: C<T>,
) -> Result<C<T>, SpecialFunctionError> {
    let (av, bv, cv) = (a.value::<T>(), b.value::<T>(), c.value::<T>());
    let pivot = cv - av;
    if pivot == T::zero() {
        return Err(SpecialFunctionError::PivotVanishes);
    }
    let mid = z * (bv - av) + (av * T::lit(2.0) - cv);
    let hi = (z - T::one()) * av;
    Ok(-(mid * f_a + hi * f_a_plus) / pivot)
}

/// `F(a, b+1; b+2; z)` from `F(a, b; b+1; z)`, using the special value `(1 − z)^(1−a)`.
pub fn hyp2f1_anchor_step<T: Real>(
    a: Half,
    b: Half,
    z: C<T>,
    f: C<T>,
) -> Result<C<T>, SpecialFunctionError> {
    let bp = (b + 1).value::<T>();
    let denom = z * (bp - a.value::<T>());
    if denom.norm() == T::zero() {
        return Err(SpecialFunctionError::PivotVanishes);
    }
    let sp = cpow_half(one::<T>() - z, 2 - a.0);
    Ok((f - sp) * bp / denom)
}

/// `₂F₁(a, n/2; n/2 + 1; z)` for odd `2a`, stepping from the nearest anchor.
pub fn hyp2f1_half<T: Real>(a: Half, n: usize, z: C<T>) -> Result<C<T>, SpecialFunctionError> {
    if a.0 % 2 == 0 {
        return Err(SpecialFunctionError::Domain(format!(
            "a = {}/2 must be a half-odd integer",
            a.0
        )));
    }
    if n == 0 || z.norm() == T::zero() {
        return Ok(one());
    }
    let odd = n % 2 == 1;
    let b = Half(n as i32);
    let c = b + 1;
    let om = one::<T>() - z;
    if a.0 < 0 {
        let mut f = if odd { hyp2f1_odd(n, z)? } else { hyp2f1_even(n, z)? };
        let mut cur = Half(-1);
        while cur > a {
            // centre at cur−1: (cur−1)(F(cur) − F(cur−1)) = b((1−z)^(1−cur) − F(cur−1))
            let lower = cur - 1;
            let bv = b.value::<T>();
            let lv = lower.value::<T>();
            let pivot = bv - lv;
            if pivot == T::zero() {
                return Err(SpecialFunctionError::PivotVanishes);
            }
            let sp = cpow_half(om, -lower.0);
            f = (sp * bv - f * lv) / pivot;
            cur = lower;
        }
        Ok(f)
    } else {
        let mut f = if odd {
            hyp2f1_odd_recip(n, z)?
        } else {
            hyp2f1_even_recip(n, z)?
        };
        let mut cur = Half(1);
        while cur < a {
            let sp = cpow_half(om, -cur.0);
            f = hyp2f1_contiguous_step(cur, b, c, f, (Neighbor::BPlus, sp), Neighbor::APlus)?;
            cur = cur + 1;
        }
        Ok(f)
    }
}
