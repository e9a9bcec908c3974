//! Fixed-point big-integer evaluation of logarithms of rationals.
//!
//! Values are represented as `m / 2^bits` with `m: BigInt`. This is enough to
//! evaluate `q0 + sum q_i ln(p_i)` to a few hundred bits, which is all the
//! reporting layer ever asks for.

use num::bigint::Sign;
use num::{BigInt, One, Signed, ToPrimitive, Zero};

use crate::exact::Rational;

/// `ln(n) * 2^bits`, rounded to a few ulp, for an integer `n >= 1`.
pub fn ln_u64_fixed(n: u64, bits: u32) -> BigInt {
    assert!(n >= 1);
    if n == 1 {
        return BigInt::zero();
    }
    // n = 2^e * r with r in [1, 2)
    let e = 63 - n.leading_zeros() as i64;
    let rf: BigInt = (BigInt::from(n) << bits) >> e as u32;
    let one: BigInt = BigInt::one() << bits;
    let ln_r = if rf == one {
        BigInt::zero()
    } else {
        let z = ((&rf - &one) << bits) / (&rf + &one);
        BigInt::from(2) * atanh_fixed(&z, bits)
    };
    ln_r + BigInt::from(e) * ln2_fixed(bits)
}

/// `ln(2) * 2^bits` via `2 atanh(1/3)`.
pub fn ln2_fixed(bits: u32) -> BigInt {
    let z: BigInt = (BigInt::one() << bits) / BigInt::from(3);
    BigInt::from(2) * atanh_fixed(&z, bits)
}

/// `atanh(z) * 2^bits` for fixed-point `z` with `|z| < 1`.
fn atanh_fixed(z: &BigInt, bits: u32) -> BigInt {
    let z2 = (z * z) >> bits;
    let mut term = z.clone();
    let mut sum = z.clone();
    let mut k: u64 = 3;
    loop {
        term = (&term * &z2) >> bits;
        if term.is_zero() {
            break;
        }
        let contrib = &term / BigInt::from(k);
        if contrib.is_zero() {
            break;
        }
        sum += contrib;
        k += 2;
    }
    sum
}

/// `r * 2^bits`, truncated.
pub fn rational_fixed(r: &Rational, bits: u32) -> BigInt {
    (r.numer() << bits) / r.denom()
}

/// Convert a fixed-point value back to `f64`.
pub fn fixed_to_f64(m: &BigInt, bits: u32) -> f64 {
    if m.is_zero() {
        return 0.0;
    }
    // Shift so the remaining integer fits comfortably in f64 range.
    let nbits = m.bits() as i64;
    if nbits <= 900 {
        let v = m.to_f64().unwrap_or(0.0);
        return v / 2f64.powi(bits as i32);
    }
    let shift = (nbits - 64) as u32;
    let sign = if m.sign() == Sign::Minus { -1.0 } else { 1.0 };
    let top = (m.abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    sign * top * 2f64.powi(shift as i32 - bits as i32)
}
