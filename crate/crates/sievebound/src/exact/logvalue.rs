use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{BigInt, One, Signed, ToPrimitive, Zero};

use crate::error::ExactError;
use crate::exact::bigfloat::{fixed_to_f64, ln_u64_fixed, rational_fixed};
use crate::exact::Rational;

/// Default precision (bits) for numeric rendering of exact values.
pub const DEFAULT_PRECISION: u32 = 256;

const GUARD_BITS: u32 = 64;

/// Closed-form scalar `q0 + sum q_i * ln(p_i)` with rational `q_i` and prime
/// integer arguments `p_i`.
///
/// Arguments are canonicalized over primes on construction: `ln(6/5)` is
/// stored as `ln 2 + ln 3 - ln 5`. Two values compare equal iff their
/// canonical forms agree field-wise, which makes exact equality decidable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogValue {
    rational: Rational,
    logs: BTreeMap<u64, Rational>,
}

impl LogValue {
    pub fn zero() -> Self {
        LogValue {
            rational: Rational::zero(),
            logs: BTreeMap::new(),
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        LogValue {
            rational: r,
            logs: BTreeMap::new(),
        }
    }

    /// `ln(arg)` for a positive rational argument.
    pub fn ln(arg: &Rational) -> Result<Self, ExactError> {
        let mut v = LogValue::zero();
        v.add_log_term(arg, &Rational::one())?;
        Ok(v)
    }

    /// `arcoth(x) = ln((x+1)/(x-1)) / 2`, the normalization used for every
    /// inverse-hyperbolic constant in this crate.
    pub fn arcoth(x: &Rational) -> Result<Self, ExactError> {
        let one = Rational::one();
        if x.abs() <= one {
            return Err(ExactError::InvalidArcothArgument(x.clone()));
        }
        let arg = (x + &one) / (x - &one);
        let mut v = LogValue::zero();
        v.add_log_term(&arg, &(Rational::new(BigInt::one(), BigInt::from(2))))?;
        Ok(v)
    }

    /// Adds `coeff * ln(arg)` in place, decomposing `arg` over primes.
    pub fn add_log_term(&mut self, arg: &Rational, coeff: &Rational) -> Result<(), ExactError> {
        if !arg.is_positive() {
            return Err(ExactError::NonPositiveLogArgument(arg.clone()));
        }
        if coeff.is_zero() {
            return Ok(());
        }
        for (p, e) in factor_big(arg.numer())? {
            self.bump(p, &(coeff * Rational::from_integer(BigInt::from(e))));
        }
        for (p, e) in factor_big(arg.denom())? {
            self.bump(p, &(-coeff * Rational::from_integer(BigInt::from(e))));
        }
        Ok(())
    }

    fn bump(&mut self, prime: u64, delta: &Rational) {
        let entry = self.logs.entry(prime).or_insert_with(Rational::zero);
        *entry += delta;
        if entry.is_zero() {
            self.logs.remove(&prime);
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    /// Canonical prime-log terms, `(prime, coefficient)` pairs.
    pub fn log_terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.logs.iter().map(|(p, c)| (*p, c))
    }

    /// Some(rational) when no log terms remain.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.logs.is_empty() {
            Some(&self.rational)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.logs.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return LogValue::zero();
        }
        LogValue {
            rational: &self.rational * c,
            logs: self.logs.iter().map(|(p, q)| (*p, q * c)).collect(),
        }
    }

    /// Numeric value together with a guaranteed absolute error bound.
    ///
    /// `precision` is in bits and must be at least 53; the bound is
    /// `2^(1-precision) * (1 + sum |q_i|)` plus the final f64 rounding.
    pub fn to_f64(&self, precision: u32) -> (f64, f64) {
        let precision = precision.max(53);
        let work = precision + GUARD_BITS;
        let mut acc = rational_fixed(&self.rational, work);
        let mut coeff_mass = 0.0f64;
        for (p, q) in &self.logs {
            let lnp = ln_u64_fixed(*p, work);
            acc += &lnp * q.numer() / q.denom();
            coeff_mass += q.to_f64().unwrap_or(0.0).abs();
        }
        let value = fixed_to_f64(&acc, work);
        let bound = 2f64.powi(1 - precision as i32) * (1.0 + coeff_mass)
            + value.abs() * f64::EPSILON;
        (value, bound)
    }

    /// Numeric value at the default 256-bit precision.
    pub fn to_f64_default(&self) -> (f64, f64) {
        self.to_f64(DEFAULT_PRECISION)
    }
}

impl Add<&LogValue> for &LogValue {
    type Output = LogValue;
    fn add(self, rhs: &LogValue) -> LogValue {
        let mut out = self.clone();
        out.rational += &rhs.rational;
        for (p, q) in &rhs.logs {
            out.bump(*p, q);
        }
        out
    }
}

impl Sub<&LogValue> for &LogValue {
    type Output = LogValue;
    fn sub(self, rhs: &LogValue) -> LogValue {
        self + &(-rhs)
    }
}

impl Neg for &LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue {
            rational: -&self.rational,
            logs: self.logs.iter().map(|(p, q)| (*p, -q)).collect(),
        }
    }
}

impl From<Rational> for LogValue {
    fn from(r: Rational) -> Self {
        LogValue::from_rational(r)
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.rational.is_zero() || self.logs.is_empty() {
            write!(f, "{}", crate::exact::format_rational(&self.rational))?;
            first = false;
        }
        for (p, q) in &self.logs {
            if first {
                if q.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if q.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let qa = q.abs();
            if qa.is_one() {
                write!(f, "ln({p})")?;
            } else {
                write!(f, "{}*ln({p})", crate::exact::format_rational(&qa))?;
            }
        }
        Ok(())
    }
}

fn factor_big(n: &BigInt) -> Result<Vec<(u64, u32)>, ExactError> {
    let n = n
        .abs()
        .to_u64()
        .ok_or_else(|| ExactError::LogArgumentTooLarge(n.clone()))?;
    Ok(factor_u64(n))
}

/// Trial-division factorization; log arguments in this domain are small
/// (breakpoint ratios of the sieve regions).
fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        push(p, e);
    }
    let mut d = 7u64;
    let wheel = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut w = 0;
    while d.saturating_mul(d) <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        push(d, e);
        d += wheel[w];
        w = (w + 1) % wheel.len();
    }
    if n > 1 {
        push(n, 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn log_additivity_collapses_to_prime_basis() {
        // ln(6/5) + ln(5/3) = ln 2
        let a = LogValue::ln(&rat(6, 5)).unwrap();
        let b = LogValue::ln(&rat(5, 3)).unwrap();
        assert_eq!(&a + &b, LogValue::ln(&rat(2, 1)).unwrap());
    }

    #[test]
    fn mixed_sum_cancels_logs() {
        // (2 ln2 - 3/4) + (17/12 - 2 ln2) = 2/3
        let mut a = LogValue::from_rational(rat(-3, 4));
        a.add_log_term(&rat(2, 1), &rat(2, 1)).unwrap();
        let mut b = LogValue::from_rational(rat(17, 12));
        b.add_log_term(&rat(2, 1), &rat(-2, 1)).unwrap();
        let sum = &a + &b;
        assert_eq!(sum, LogValue::from_rational(rat(2, 3)));
        assert_eq!(sum.as_rational(), Some(&rat(2, 3)));
    }

    #[test]
    fn arcoth_normalizes_to_half_log() {
        // arcoth 4 = ln(5/3) / 2
        let a = LogValue::arcoth(&rat(4, 1)).unwrap();
        let b = LogValue::ln(&rat(5, 3)).unwrap().scale(&rat(1, 2));
        assert_eq!(a, b);
    }

    #[test]
    fn to_f64_matches_ln() {
        let (v, bound) = LogValue::ln(&rat(5, 3)).unwrap().to_f64(256);
        assert!((v - (5f64 / 3.0).ln()).abs() < 1e-13);
        // bound is dominated by the final f64 rounding, not the 256-bit work
        assert!(bound < 1e-15);
    }

    #[test]
    fn to_f64_reference_rational() {
        let (v, _) = LogValue::from_rational(rat(2977019, 51030)).to_f64(256);
        assert!((v - 58.338604742308444).abs() < 1e-10);
        assert!(v > 58.3386047422);
    }

    #[test]
    fn zero_maps_to_zero_with_zero_bound_mass() {
        let (v, bound) = LogValue::zero().to_f64(256);
        assert_eq!(v, 0.0);
        assert!(bound <= 2f64.powi(-255) * 1.0 + f64::EPSILON);
    }

    #[test]
    fn display_canonical() {
        let mut v = LogValue::from_rational(rat(1, 3));
        v.add_log_term(&rat(6, 5), &rat(1, 1)).unwrap();
        assert_eq!(v.to_string(), "1/3 + ln(2) + ln(3) - ln(5)");
    }
}
