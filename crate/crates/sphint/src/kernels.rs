//! Compact single-piece polynomial kernels `W(r, h) = C2/h² · Σ b_k (r/h)^k` for `r < h`.

use thiserror::Error;

use crate::real::Real;

/// Highest polynomial degree the closed-form tables are built for.
pub const MAX_KERNEL_DEGREE: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("unknown kernel `{0}`")]
    Unknown(String),
    #[error("kernel degree {0} exceeds the supported maximum {MAX_KERNEL_DEGREE}")]
    DegreeTooHigh(usize),
    #[error("kernel does not vanish at q = 1 (k(1) = {0})")]
    NotCompact(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyKernel<T> {
    /// `b_k` indexed by power.
    pub coefficients: Vec<T>,
    /// Two-dimensional normalization constant.
    pub c2: T,
    pub support: T,
    /// The same polynomial in powers of `1 − q`, for pointwise evaluation near the cutoff.
    shifted: Vec<T>,
}

/// Re-expands `Σ b_k q^k` as `Σ c_j (1 − q)^j`: `c_j = (−1)^j Σ_k C(k, j) b_k`.
fn shift_to_cutoff<V>(b: &[V]) -> Vec<V>
where
    V: Copy + std::ops::Add<Output = V> + std::ops::Mul<Output = V> + std::ops::Neg<Output = V>,
    V: From<i32>,
{
    (0..b.len())
        .map(|j| {
            let mut c = V::from(0);
            let mut binom = 1i64;
            for (k, &bk) in b.iter().enumerate().skip(j) {
                if k > j {
                    binom = binom * k as i64 / (k - j) as i64;
                }
                c = c + bk * V::from(binom as i32);
            }
            if j % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// Multiplies integer polynomials given lowest power first.
fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl<T: Real> PolyKernel<T> {
    /// A compactly supported kernel; `k(1)` must vanish.
    pub fn new(coefficients: Vec<T>, c2: T, support: T) -> Result<Self, KernelError> {
        let at_one: T = coefficients.iter().copied().sum();
        let scale: T = coefficients.iter().map(|b| b.abs()).sum();
        if at_one.abs() > T::lit(1e3) * T::epsilon() * scale.max(T::one()) {
            return Err(KernelError::NotCompact(at_one.to_f64_lossy()));
        }
        Self::from_coefficients(coefficients, c2, support)
    }

    /// Like [`PolyKernel::new`] without the cutoff check.
    pub fn from_coefficients(coefficients: Vec<T>, c2: T, support: T) -> Result<Self, KernelError> {
        if coefficients.len() > MAX_KERNEL_DEGREE + 1 {
            return Err(KernelError::DegreeTooHigh(coefficients.len() - 1));
        }
        let wide: Vec<f64> = coefficients.iter().map(|v| v.to_f64_lossy()).collect();
        let shifted = shift_to_cutoff(&wide).into_iter().map(T::lit).collect();
        Ok(Self {
            coefficients,
            c2,
            support,
            shifted,
        })
    }

    /// `k(q) = (1 − q)⁶ (1 + 6q + 35/3 q²)` with `C2 = 9/π`.
    ///
    /// `9/π` is the constant that makes `∫ W = 1` over the unit support; the frequently quoted
    /// `27/(16π)` does not normalize this form of the kernel.
    pub fn wendland4() -> Self {
        // 3·k(q) has integer coefficients
        let mut p = vec![1i64];
        for _ in 0..6 {
            p = poly_mul(&p, &[1, -1]);
        }
        let p = poly_mul(&p, &[3, 18, 35]);
        let third = |v: &Vec<i64>| v.iter().map(|&c| T::from_i64(c) / T::lit(3.0)).collect();
        let shifted: Vec<i64> = shift_to_cutoff(&p);
        Self {
            coefficients: third(&p),
            c2: T::lit(9.0) / T::PI(),
            support: T::one(),
            shifted: third(&shifted),
        }
    }

    pub fn by_name(name: &str) -> Result<Self, KernelError> {
        match name.to_ascii_lowercase().as_str() {
            "wendland4" | "wendland-4" => Ok(Self::wendland4()),
            _ => Err(KernelError::Unknown(name.to_string())),
        }
    }

    pub fn with_support(mut self, h: T) -> Self {
        self.support = h;
        self
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// The shape function `k(q)`, zero for `q ≥ 1`.
    pub fn shape(&self, q: T) -> T {
        if q >= T::one() {
            return T::zero();
        }
        let t = T::one() - q;
        self.shifted.iter().rev().fold(T::zero(), |acc, &c| acc * t + c)
    }

    /// `dk/dq`, zero for `q ≥ 1`.
    pub fn shape_derivative(&self, q: T) -> T {
        if q >= T::one() {
            return T::zero();
        }
        let t = T::one() - q;
        let mut acc = T::zero();
        for (j, &c) in self.shifted.iter().enumerate().skip(1).rev() {
            acc = acc * t + c * T::from_i64(j as i64);
        }
        -acc
    }

    /// `W(r, h)` with the configured support.
    pub fn value(&self, r: T) -> T {
        let h = self.support;
        self.c2 / (h * h) * self.shape(r / h)
    }

    /// `∇W` evaluated at the offset `(dx, dy)`.
    pub fn gradient(&self, dx: T, dy: T) -> (T, T) {
        let h = self.support;
        let r = (dx * dx + dy * dy).sqrt();
        if r == T::zero() {
            return (T::zero(), T::zero());
        }
        let s = self.c2 / (h * h * h) * self.shape_derivative(r / h) / r;
        (s * dx, s * dy)
    }

    /// `∫_disc C2 k(|x|) dx = 2π C2 Σ b_k/(k+2)`.
    pub fn disc_integral(&self) -> T {
        let s: T = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, &b)| b / T::from_i64(k as i64 + 2))
            .sum();
        T::TAU() * self.c2 * s
    }
}

/// `k·b_k` stored at power `k − 1`.
pub fn kernel_derivative_coefficients<T: Real>(k: &PolyKernel<T>) -> Vec<T> {
    k.coefficients
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &b)| b * T::from_i64(i as i64))
        .collect()
}
