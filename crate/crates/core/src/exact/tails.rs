//! Weights of the saltus series, certified tail bounds and an outward-rounded
//! dyadic accumulator.

use super::interval::Interval;
use super::rational::{self, Rational};
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;

type Enclosure = Interval<Rational>;

/// Jump weight attached to index `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Weight {
    /// `1/n²`
    InverseSquare,
    /// `2^-n`
    Binary,
}

impl Weight {
    pub fn of(&self, n: &BigUint) -> Rational {
        match self {
            Weight::InverseSquare => {
                Rational::new(BigInt::one(), BigInt::from(n * n))
            }
            Weight::Binary => {
                let e = n.to_u64().expect("binary weight exponent exceeds u64");
                rational::pow2_neg(e)
            }
        }
    }

    /// Upper bound on `Σ_{n > big_n} weight(n)`.
    pub fn tail_bound(&self, big_n: u64) -> Rational {
        weight_tail_bound(*self, big_n)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Weight::InverseSquare => "inverse-square",
            Weight::Binary => "binary",
        })
    }
}

impl FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inverse-square" => Ok(Weight::InverseSquare),
            "binary" => Ok(Weight::Binary),
            other => Err(Error::InvalidArgument(format!("unknown weight `{other}`"))),
        }
    }
}

/// `Σ_{n>N} 1/n² < 1/N` by telescoping; `Σ_{n>N} 2^-n = 2^-N` exactly.
pub fn weight_tail_bound(weight: Weight, big_n: u64) -> Rational {
    assert!(big_n >= 1);
    match weight {
        Weight::InverseSquare => rational::rat(1, 1) / rational::int(big_n),
        Weight::Binary => rational::pow2_neg(big_n),
    }
}

/// Integral sandwich for `Σ_{n≥m} (s + n·d)^-2`:
/// `[1/(d(s + m d)), 1/(d(s + (m−1) d))]`.
pub fn shifted_tail_bounds(s: u64, d: u64, m: &BigUint) -> Enclosure {
    assert!(s >= 1 && d >= 1 && !m.is_zero());
    let s = BigUint::from(s);
    let d = BigUint::from(d);
    let lo_den = &d * (&s + m * &d);
    let hi_den = &d * (&s + (m - 1u32) * &d);
    Interval::new(
        Rational::new(BigInt::one(), BigInt::from(lo_den)),
        Rational::new(BigInt::one(), BigInt::from(hi_den)),
    )
}

/// Sharper enclosure of the same tail: the first `prefix` terms are summed
/// exactly and the remainder is sandwiched.
pub fn shifted_tail_enclosure(s: u64, d: u64, m: &BigUint, prefix: u64) -> Enclosure {
    let mut exact = Rational::zero();
    let mut n = m.clone();
    for _ in 0..prefix {
        let idx = BigUint::from(s) + &n * d;
        exact += Rational::new(BigInt::one(), BigInt::from(&idx * &idx));
        n += 1u32;
    }
    shifted_tail_bounds(s, d, &n) + Interval::point(exact)
}

/// Sum of nonnegative terms kept as integer multiples of `2^-bits`, rounding
/// every term outward. The result encloses the exact sum.
#[derive(Clone, Debug)]
pub struct DyadicSum {
    bits: u64,
    lo: BigInt,
    hi: BigInt,
}

impl DyadicSum {
    pub fn new(bits: u64) -> Self {
        DyadicSum {
            bits,
            lo: BigInt::zero(),
            hi: BigInt::zero(),
        }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn add_rational(&mut self, r: &Rational) {
        self.lo += rational::dyadic_floor(r, self.bits);
        self.hi += rational::dyadic_ceil(r, self.bits);
    }

    pub fn add_enclosure(&mut self, e: &Enclosure) {
        self.lo += rational::dyadic_floor(e.lo(), self.bits);
        self.hi += rational::dyadic_ceil(e.hi(), self.bits);
    }

    /// Adds a term known only to lie in `[0, 2^-bits]`.
    pub fn add_unit_uncertainty(&mut self) {
        self.hi += 1;
    }

    /// Adds `1/n²` without forming the rational when it is below one unit.
    pub fn add_inverse_square(&mut self, n: &BigUint) {
        let nb = n.bits();
        if nb >= 1 && 2 * (nb - 1) > self.bits {
            self.add_unit_uncertainty();
            return;
        }
        let n2 = BigInt::from(n * n);
        let (q, r) = BigInt::from(rational::pow2(self.bits)).div_rem(&n2);
        self.hi += if r.is_zero() { q.clone() } else { &q + 1 };
        self.lo += q;
    }

    /// Adds `2^-e`.
    pub fn add_pow2_neg(&mut self, e: &BigUint) {
        match e.to_u64() {
            Some(e) if e <= self.bits => {
                let unit = BigInt::from(rational::pow2(self.bits - e));
                self.lo += &unit;
                self.hi += unit;
            }
            _ => self.add_unit_uncertainty(),
        }
    }

    pub fn enclosure(&self) -> Enclosure {
        Interval::new(
            rational::dyadic(self.lo.clone(), self.bits),
            rational::dyadic(self.hi.clone(), self.bits),
        )
    }
}
