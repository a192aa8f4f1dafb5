use super::interval::Interval;
use super::quadratic::QuadraticIrrational;
use super::rational::{self, Rational};
use crate::error::Result;
use num_bigint::BigInt;
use num_traits::Zero;
use std::cmp::Ordering;
use std::fmt;

/// An evaluation argument: an exact rational or a quadratic irrational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Rational(Rational),
    Irrational(QuadraticIrrational),
}

impl Point {
    pub fn parse(text: &str) -> Result<Self> {
        if text.contains("sqrt") {
            QuadraticIrrational::parse(text).map(Point::Irrational)
        } else {
            rational::parse_rational(text).map(Point::Rational)
        }
    }

    /// Exact order of `self` versus `r`.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        match self {
            Point::Rational(x) => x.cmp(r),
            Point::Irrational(x) => x.cmp_rational(r),
        }
    }

    pub fn cmp_irrational(&self, xi: &QuadraticIrrational) -> Ordering {
        match self {
            Point::Rational(x) => xi.cmp_rational(x).reverse(),
            Point::Irrational(x) => x.cmp_irrational(xi),
        }
    }

    pub fn cmp_point(&self, other: &Point) -> Ordering {
        match other {
            Point::Rational(r) => self.cmp_rational(r),
            Point::Irrational(x) => self.cmp_irrational(x),
        }
    }

    pub fn offset(&self, r: &Rational) -> Point {
        match self {
            Point::Rational(x) => Point::Rational(x + r),
            Point::Irrational(x) => Point::Irrational(x.offset(r)),
        }
    }

    /// `self · k` for nonzero `k`.
    pub fn scale(&self, k: &Rational) -> Point {
        match self {
            Point::Rational(x) => Point::Rational(x * k),
            Point::Irrational(x) => Point::Irrational(x.scale(k)),
        }
    }

    pub fn floor(&self) -> BigInt {
        match self {
            Point::Rational(x) => rational::floor(x),
            Point::Irrational(x) => x.floor(),
        }
    }

    /// Smallest integer `z` with `z ≥ self`.
    pub fn ceil(&self) -> BigInt {
        match self {
            Point::Rational(x) => rational::ceil(x),
            Point::Irrational(x) => x.ceil(),
        }
    }

    /// Enclosure of width at most `2^-bits` (exact for rationals).
    pub fn enclosure_bits(&self, bits: u64) -> Interval<Rational> {
        match self {
            Point::Rational(x) => Interval::point(x.clone()),
            Point::Irrational(x) => x.enclosure_bits(bits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Point::Rational(x) => rational::to_f64(x),
            Point::Irrational(x) => x.to_f64(),
        }
    }
}

impl From<Rational> for Point {
    fn from(r: Rational) -> Self {
        Point::Rational(r)
    }
}

impl From<QuadraticIrrational> for Point {
    fn from(x: QuadraticIrrational) -> Self {
        Point::Irrational(x)
    }
}

impl Default for Point {
    fn default() -> Self {
        Point::Rational(Rational::zero())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Rational(x) => f.write_str(&rational::format_exact(x)),
            Point::Irrational(x) => x.fmt(f),
        }
    }
}
