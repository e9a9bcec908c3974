//! Exact scalar arithmetic: arbitrary-precision rationals and log-extended
//! closed-form values, plus controlled conversion to floating point.

pub mod bigfloat;
mod logvalue;

pub use logvalue::{LogValue, DEFAULT_PRECISION};

use num::{BigInt, One, Signed, Zero};
use std::str::FromStr;

use crate::error::ExactError;

pub type Int = BigInt;
/// Arbitrary-precision exact fraction; the coefficient domain for all exact
/// computation in this crate. Always stored reduced with positive denominator.
pub type Rational = num::BigRational;

/// Small-literal constructor.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// n!
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n as u64 {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}

/// Parses `"p/q"` or `"p"` with arbitrary-precision integers.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let s = s.trim();
    let r = Rational::from_str(s).map_err(|_| ExactError::ParseRational(s.to_string()))?;
    Ok(r)
}

/// Prints `p/q`, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact conversion of an f64 into a rational (the f64 is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Numeric value of a bare rational with error bound, mirroring
/// [`LogValue::to_f64`].
pub fn rational_to_f64(r: &Rational) -> f64 {
    LogValue::from_rational(r.clone()).to_f64_default().0
}

/// True when `r` lies in the open interval `(lo, hi)`.
pub fn in_open_interval(r: &Rational, lo: &Rational, hi: &Rational) -> bool {
    r > lo && r < hi
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

pub fn rational_zero() -> Rational {
    Rational::zero()
}
