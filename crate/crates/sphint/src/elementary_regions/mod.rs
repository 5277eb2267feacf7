//! Definite integrals of `r^n`, `r^n cos(aθ)` and `r^n sin(bθ)` (with `dr dθ`) over cones,
//! circular segments and triangle stubs inside the unit disc.

mod cone;
mod segment;
mod stub;

use thiserror::Error;

pub use cone::{cone_integral, DiscTable};
pub use segment::segment_integral;
pub use stub::stub_integral;

use crate::real::Real;
use crate::special_functions::SpecialFunctionError;

/// Highest angular harmonic produced by first derivatives of a linear field.
pub const MAX_HARMONIC: u32 = 2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
    #[error("region parameter out of range: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `r^n`
    P,
    /// `r^n cos(aθ)`
    C,
    /// `r^n sin(bθ)`
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FundamentalTerm {
    pub family: Family,
    pub n: u32,
    pub harmonic: u32,
}

impl FundamentalTerm {
    pub fn p(n: u32) -> Self {
        Self {
            family: Family::P,
            n,
            harmonic: 0,
        }
    }

    pub fn c(n: u32, a: u32) -> Self {
        assert!(a >= 1, "cosine term needs a positive harmonic");
        Self {
            family: Family::C,
            n,
            harmonic: a,
        }
    }

    pub fn s(n: u32, b: u32) -> Self {
        assert!(b >= 1, "sine term needs a positive harmonic");
        Self {
            family: Family::S,
            n,
            harmonic: b,
        }
    }

    /// The angular factor at `θ`.
    pub fn angular<T: Real>(&self, theta: T) -> T {
        let h = T::from_i64(self.harmonic as i64);
        match self.family {
            Family::P => T::one(),
            Family::C => (h * theta).cos(),
            Family::S => (h * theta).sin(),
        }
    }
}

/// `r^n cos(aθ) sin(bθ)` as weighted sine terms; a vanishing difference harmonic is dropped.
pub fn reduce_product_term<T: Real>(n: u32, a: u32, b: u32) -> Vec<(T, FundamentalTerm)> {
    let half = T::lit(0.5);
    let mut out = vec![(half, FundamentalTerm::s(n, a + b))];
    match a.cmp(&b) {
        std::cmp::Ordering::Greater => out.push((-half, FundamentalTerm::s(n, a - b))),
        std::cmp::Ordering::Less => out.push((half, FundamentalTerm::s(n, b - a))),
        std::cmp::Ordering::Equal => {}
    }
    out
}
