//! Exact rationals and the helpers the rest of the crate needs around them.
//!
//! `Rational` is `num_rational::BigRational`, which keeps every value in
//! canonical form (positive denominator, gcd-reduced) after each operation.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * k)
}

/// Canonical string form: `"p/q"`, `"p"` when q = 1, `"0"` for zero.
pub fn to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"` or `"p"`. Non-canonical input is reduced; a zero
/// denominator is rejected.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
            let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("{s:?}: zero denominator")));
            }
            Ok(Rational::new(n, d))
        }
        None => BigInt::from_str(s)
            .map(Rational::from_integer)
            .map_err(|e| Error::Parse(format!("{s:?}: {e}"))),
    }
}

/// Natural log of a positive big integer, valid far beyond the f64 range.
pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().map_or(f64::NAN, f64::ln);
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit value fits in f64");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// ln |r| for nonzero r.
pub fn ln_abs(r: &Rational) -> f64 {
    debug_assert!(!r.is_zero());
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

pub fn to_f64(r: &Rational) -> f64 {
    match r.to_f64() {
        Some(v) if v.is_finite() => v,
        _ => {
            let sign = if r.numer().sign() == Sign::Minus { -1.0 } else { 1.0 };
            sign * ln_abs(r).exp()
        }
    }
}

/// Exact conversion of a finite binary64 value.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn is_canonical(r: &Rational) -> bool {
    let n = r.numer().clone();
    let d = r.denom().clone();
    d.is_positive() && num_integer::Integer::gcd(&n, &d).is_one()
        || (n.is_zero() && d.is_one())
}
