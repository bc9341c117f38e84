//! Exact polynomial arithmetic over the rationals.
//!
//! [`MultiPoly`] is a sparse multivariate polynomial keyed by exponent
//! vectors, [`UniPoly`] a dense univariate one. [`DiffOperator`] reuses the
//! multivariate representation for constant-coefficient differential
//! operators `Σ a(α) ∂^α`. Nothing in this module rounds.

mod charpoly;
mod multi;
mod operator;
mod stability;
mod uni;

pub use charpoly::{charpoly, charpoly_integer, IntMatrix};
pub use multi::{Exponent, MultiPoly};
pub use operator::{falling_factorial, DiffOperator};
pub use stability::{
    random_rational, refute_stability, restrict_to_line, LineWitness, StabilityVerdict, Witness,
    DEFAULT_RATIONAL_BOUND,
};
pub use uni::{RootInterval, SturmChain, UniPoly};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision rational coefficient.
pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-3/4"` or a `(num, den)` pair of decimal strings.
pub fn parse_rational(num: &str, den: &str) -> crate::Result<Rational> {
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|_| crate::Error::Parse(format!("bad numerator {num:?}")))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|_| crate::Error::Parse(format!("bad denominator {den:?}")))?;
    if d == BigInt::from(0) {
        return Err(crate::Error::Parse("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

/// Parses a rational written as `a` or `a/b`.
pub fn parse_rational_str(s: &str) -> crate::Result<Rational> {
    match s.split_once('/') {
        Some((n, d)) => parse_rational(n, d),
        None => parse_rational(s, "1"),
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
