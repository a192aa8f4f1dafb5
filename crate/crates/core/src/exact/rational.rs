//! Helpers around [`BigRational`]: parsing, rounding, dyadic grids and
//! certified square-root upper bounds.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(z: impl Into<BigInt>) -> Rational {
    Rational::from_integer(z.into())
}

/// Parses `p/q` or `p`, with an optional sign on `p`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidNumber(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if !den.is_positive() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Renders as `p/q`, always including the denominator.
pub fn format_exact(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil(r: &Rational) -> BigInt {
    -(-r.numer()).div_floor(r.denom())
}

pub fn pow2(e: u64) -> BigUint {
    BigUint::one() << e
}

pub fn pow2_neg(e: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(pow2(e)))
}

/// `floor(r · 2^bits)`.
pub fn dyadic_floor(r: &Rational, bits: u64) -> BigInt {
    (r.numer() << bits).div_floor(r.denom())
}

/// `ceil(r · 2^bits)`.
pub fn dyadic_ceil(r: &Rational, bits: u64) -> BigInt {
    -((-r.numer()) << bits).div_floor(r.denom())
}

pub fn dyadic(k: BigInt, bits: u64) -> Rational {
    Rational::new(k, BigInt::from(pow2(bits)))
}

/// Number of bits needed so that `2^-bits ≤ cap`, for `cap > 0`.
pub fn bits_for(cap: &Rational) -> u64 {
    assert!(cap.is_positive());
    // 2^-b ≤ p/q  ⇔  q ≤ p·2^b
    let p = cap.numer().magnitude();
    let q = cap.denom().magnitude();
    let mut b = q.bits().saturating_sub(p.bits());
    while (p << b) < *q {
        b += 1;
    }
    b
}

/// Smallest dyadic `k/2^bits` whose square is at least `x ≥ 0`.
///
/// The returned `r` satisfies `r² ≥ x` and `r - √x < 2^-bits`.
pub fn sqrt_upper(x: &Rational, bits: u64) -> Rational {
    assert!(!x.is_negative(), "square root of a negative rational");
    let scaled = Rational::new(x.numer() << (2 * bits), x.denom().clone());
    let fl = floor(&scaled);
    let s = fl.sqrt();
    let k = if Rational::from_integer(&s * &s) >= scaled {
        s
    } else {
        s + 1
    };
    dyadic(k, bits)
}

/// Decimal rendering with `digits` fractional digits. `up` selects rounding
/// toward +∞ (otherwise toward −∞), so enclosure endpoints stay outward.
pub fn to_decimal_directed(r: &Rational, digits: u32, up: bool) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r * Rational::from_integer(scale);
    let k = if up { ceil(&scaled) } else { floor(&scaled) };
    render_decimal(k, digits)
}

/// Decimal rendering rounded to nearest (ties away from zero).
pub fn to_decimal_nearest(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r * Rational::from_integer(scale);
    let k = scaled.round().to_integer();
    render_decimal(k, digits)
}

fn render_decimal(k: BigInt, digits: u32) -> String {
    let negative = k.sign() == Sign::Minus;
    let mut s = k.magnitude().to_str_radix(10);
    let digits = digits as usize;
    if digits > 0 {
        while s.len() <= digits {
            s.insert(0, '0');
        }
        s.insert(s.len() - digits, '.');
    }
    if negative {
        s.insert(0, '-');
    }
    s
}

/// Lossy conversion for diagnostics and display only.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}
