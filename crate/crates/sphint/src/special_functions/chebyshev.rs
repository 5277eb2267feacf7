//! Chebyshev polynomials as explicit power series with integer coefficients.

use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChebyshevKind {
    First,
    Second,
}

/// `Σ coefficient · x^power`, nonzero terms only, highest power first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChebyshevSeries {
    pub kind: ChebyshevKind,
    pub degree: usize,
    pub coefficients: Vec<(usize, i64)>,
}

impl ChebyshevSeries {
    pub fn eval<T: Real>(&self, x: T) -> T {
        self.coefficients
            .iter()
            .map(|&(p, c)| T::from_i64(c) * x.powi(p as i32))
            .sum()
    }

    /// Dense coefficient vector indexed by power.
    pub fn dense(&self) -> Vec<i64> {
        let mut out = vec![0; self.degree + 1];
        for &(p, c) in &self.coefficients {
            out[p] = c;
        }
        out
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}

/// Explicit expansion of `T_n` or `U_n`.
///
/// `U_n(x) = Σ_k (−1)^k C(n−k, k) 2^(n−2k) x^(n−2k)` and
/// `T_n(x) = (n/2) Σ_k (−1)^k (n−k−1)! / (k! (n−2k)!) (2x)^(n−2k)`.
pub fn chebyshev_coefficients(kind: ChebyshevKind, n: usize) -> ChebyshevSeries {
    let mut coefficients = Vec::new();
    for k in 0..=n / 2 {
        let p = n - 2 * k;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let c = match kind {
            ChebyshevKind::Second => binomial(n - k, k) << p,
            ChebyshevKind::First if n == 0 => 1,
            // n/(n−k) · C(n−k, k) is an integer for 2k ≤ n
            ChebyshevKind::First => (binomial(n - k, k) * n as i64 / (n - k) as i64) << p >> 1,
        };
        coefficients.push((p, sign * c));
    }
    ChebyshevSeries {
        kind,
        degree: n,
        coefficients,
    }
}
