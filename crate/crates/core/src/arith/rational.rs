//! Helpers around [`BigRational`]: parsing, dyadic rounding and square-root bounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational `{0}`")]
pub struct ParseRationalError(pub String);

/// Parses `p/q` or `p` in base 10. Only the numerator may carry a sign.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits_only = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let unsigned = num.strip_prefix('-').unwrap_or(num);
    if !digits_only(unsigned) {
        return Err(err());
    }
    let p: BigInt = num.parse().map_err(|_| err())?;
    let q: BigInt = match den {
        Some(d) if digits_only(d) => d.parse().map_err(|_| err())?,
        Some(_) => return Err(err()),
        None => BigInt::one(),
    };
    if q.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(p, q))
}

/// Serializes as `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// Decimal rendering with `digits` fractional digits, truncated toward zero.
/// Only for human consumption; never fed back into a decision.
pub fn approx_decimal(r: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (r * Rational::from_integer(scale.clone())).trunc().to_integer();
    let neg = r.is_negative();
    let abs = scaled.abs();
    let (ip, fp) = abs.div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{:0>width$}", fp.to_string(), width = digits)
    }
}

pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << (e as usize))
    } else {
        Rational::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

pub fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn ceil_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Largest multiple of 2^-bits that is <= r.
pub fn floor_dyadic(r: &Rational, bits: u32) -> Rational {
    let s = BigInt::one() << bits as usize;
    let n = (r * Rational::from_integer(s.clone())).floor().to_integer();
    Rational::new(n, s)
}

/// Smallest multiple of 2^-bits that is >= r.
pub fn ceil_dyadic(r: &Rational, bits: u32) -> Rational {
    let s = BigInt::one() << bits as usize;
    let n = (r * Rational::from_integer(s.clone())).ceil().to_integer();
    Rational::new(n, s)
}

/// Nearest multiple of 2^-bits (ties toward +inf).
pub fn round_dyadic(r: &Rational, bits: u32) -> Rational {
    let s = BigInt::one() << bits as usize;
    let n = (r * Rational::from_integer(s.clone()) + rat(1, 2)).floor().to_integer();
    Rational::new(n, s)
}

/// Rational upper bound on sqrt(r), accurate to about 2^-bits.
pub fn sqrt_upper(r: &Rational, bits: u32) -> Rational {
    assert!(!r.is_negative(), "sqrt of negative rational");
    if r.is_zero() {
        return Rational::zero();
    }
    let s = BigInt::one() << (2 * bits as usize);
    let m = (r * Rational::from_integer(s)).ceil().to_integer();
    let mut root = m.sqrt();
    if &root * &root < m {
        root += 1;
    }
    Rational::new(root, BigInt::one() << bits as usize)
}

/// Rational lower bound on sqrt(r), accurate to about 2^-bits.
pub fn sqrt_lower(r: &Rational, bits: u32) -> Rational {
    assert!(!r.is_negative(), "sqrt of negative rational");
    let s = BigInt::one() << (2 * bits as usize);
    let m = (r * Rational::from_integer(s)).floor().to_integer();
    Rational::new(m.sqrt(), BigInt::one() << bits as usize)
}

/// Exact square root when r is the square of a rational.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &n * &n == *r.numer() && &d * &d == *r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Number of bits needed so that 2^-bits <= r (r > 0).
pub fn bits_for(r: &Rational) -> u32 {
    assert!(r.is_positive());
    let mut b = 0u32;
    let mut p = Rational::one();
    while &p > r {
        p /= int(2);
        b += 1;
    }
    b
}

/// Integer division rounding up for positive rationals, as u64 (saturating).
pub fn ceil_u64(r: &Rational) -> u64 {
    use num_traits::ToPrimitive;
    let c = ceil_int(r);
    if c.is_negative() {
        0
    } else {
        c.to_u64().unwrap_or(u64::MAX)
    }
}

/// Wrapper that prints a rational in the `p/q` wire format.
pub struct Wire<'a>(pub &'a Rational);

impl fmt::Display for Wire<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn bit_size(r: &Rational) -> u64 {
    r.numer().bits().max(r.denom().bits())
}
