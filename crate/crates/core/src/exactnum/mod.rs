//! Exact coefficient arithmetic.
//!
//! Everything here is exact: rationals are `num_rational::BigRational`,
//! Gaussian rationals add a formal `i`, and the two generating-function
//! carriers are [`LaurentSeries`] (truncated series in λ) and
//! [`QLaurent`] (Laurent polynomials in q^{1/2}).

mod gauss;
mod qlaurent;
mod series;
pub(crate) mod serde_big;

pub use gauss::GaussRational;
pub use qlaurent::{LambdaImage, QLaurent};
pub use series::{series_sin_half, LaurentSeries};

use num_bigint::BigInt;
use num_traits::One;

pub type Rational = num_rational::BigRational;

/// Default truncation order for λ-series.
pub const DEFAULT_ORDER: i64 = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumError {
    #[error("expected a positive integer, got {0}")]
    NonPositive(i64),
    #[error("division by a series with no known nonzero coefficient")]
    ZeroDivisor,
    #[error("series has no square root with rational leading coefficient")]
    NotASquare,
    #[error("series known only to order {have}, need order {need}")]
    InsufficientPrecision { have: i64, need: i64 },
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    use num_traits::Signed;
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}
