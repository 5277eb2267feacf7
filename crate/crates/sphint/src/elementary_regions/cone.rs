use super::{Family, FundamentalTerm};
use crate::real::Real;
use crate::special_functions::C;

/// `∫_α^β ∫_0^l f(r, θ) dr dθ`.
pub fn cone_integral<T: Real>(term: FundamentalTerm, alpha: T, beta: T, l: T) -> C<T> {
    let n1 = T::from_i64(term.n as i64 + 1);
    let radial = l.powi(term.n as i32 + 1) / n1;
    let h = T::from_i64(term.harmonic as i64);
    let angular = match term.family {
        Family::P => beta - alpha,
        Family::C => ((h * beta).sin() - (h * alpha).sin()) / h,
        Family::S => ((h * alpha).cos() - (h * beta).cos()) / h,
    };
    C::new(angular * radial, T::zero())
}

/// Full-disc and half-disc (`x ≥ 0`) integrals over the unit disc, tabulated per term.
#[derive(Debug, Clone)]
pub struct DiscTable<T> {
    max_n: u32,
    full: Vec<[T; 5]>,
    half: Vec<[T; 5]>,
}

fn slot(term: FundamentalTerm) -> usize {
    match (term.family, term.harmonic) {
        (Family::P, _) => 0,
        (Family::C, 1) => 1,
        (Family::C, _) => 2,
        (Family::S, 1) => 3,
        (Family::S, _) => 4,
    }
}

impl<T: Real> DiscTable<T> {
    pub fn new(max_n: u32) -> Self {
        let terms = |n| {
            [
                FundamentalTerm::p(n),
                FundamentalTerm::c(n, 1),
                FundamentalTerm::c(n, 2),
                FundamentalTerm::s(n, 1),
                FundamentalTerm::s(n, 2),
            ]
        };
        let pi2 = T::FRAC_PI_2();
        let full = (0..=max_n)
            .map(|n| terms(n).map(|t| cone_integral(t, T::zero(), T::TAU(), T::one()).re))
            .collect();
        let half = (0..=max_n)
            .map(|n| terms(n).map(|t| cone_integral(t, -pi2, pi2, T::one()).re))
            .collect();
        Self { max_n, full, half }
    }

    fn lookup(&self, table: &[[T; 5]], term: FundamentalTerm) -> Option<T> {
        if term.n > self.max_n || term.harmonic > 2 {
            return None;
        }
        Some(table[term.n as usize][slot(term)])
    }

    /// Unit-disc integral scaled to radius `radius`.
    pub fn full(&self, term: FundamentalTerm, radius: T) -> C<T> {
        let base = self
            .lookup(&self.full, term)
            .unwrap_or_else(|| cone_integral(term, T::zero(), T::TAU(), T::one()).re);
        C::new(base * radius.powi(term.n as i32 + 1), T::zero())
    }

    /// Right half of the unit disc.
    pub fn half(&self, term: FundamentalTerm) -> C<T> {
        let pi2 = T::FRAC_PI_2();
        let base = self
            .lookup(&self.half, term)
            .unwrap_or_else(|| cone_integral(term, -pi2, pi2, T::one()).re);
        C::new(base, T::zero())
    }
}
