//! Exact rational arithmetic helpers.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rat = BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}

/// Parses "p", "-p", or "p/q" with a positive integer q. Anything else
/// (floats, whitespace, empty parts) is rejected.
pub fn parse_rat(s: &str) -> Option<Rat> {
    fn parse_int(s: &str) -> Option<BigInt> {
        if s.is_empty() {
            return None;
        }
        let body = s.strip_prefix('-').unwrap_or(s);
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse::<BigInt>().ok()
    }
    match s.split_once('/') {
        None => parse_int(s).map(BigRational::from_integer),
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() || d.is_negative() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
    }
}

/// Formats canonically: integers without a denominator, otherwise "p/q".
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
