//! Closed-form building blocks: the half-integer `₂F₁` family, central-binomial series,
//! Chebyshev expansions and the square-root / arcsecant antiderivatives.

pub mod antiderivative;
pub mod chebyshev;
pub mod complex;
pub mod hyp2f1;
pub mod series;

use thiserror::Error;

pub use antiderivative::{arcsec_power_integral, sqrt_power_antiderivative};
pub use chebyshev::{chebyshev_coefficients, ChebyshevKind, ChebyshevSeries};
pub use complex::{complex_acos, complex_asin, C};
pub use hyp2f1::{
    hyp2f1_contiguous_step, hyp2f1_even, hyp2f1_even_recip, hyp2f1_half, hyp2f1_odd,
    hyp2f1_odd_recip, hyp2f1_series, hyp2f1_special, Half, Neighbor,
};
pub use series::{series_f, series_s, series_t};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialFunctionError {
    #[error("singular point of the closed form")]
    Singular,
    #[error("order {n} has the wrong parity (expected {})", if *even { "even" } else { "odd" })]
    Parity { n: usize, even: bool },
    #[error("contiguous step pivot vanishes")]
    PivotVanishes,
    #[error("no closed form for power {n} with root exponent {m}/2")]
    Unsupported { n: i32, m: i32 },
    #[error("parameters do not match a special value")]
    NotSpecial,
    #[error("domain error: {0}")]
    Domain(String),
}
