//! Exact rational arithmetic, enclosures of quadratic irrationals, and
//! certified tail bounds.

pub mod interval;
pub mod point;
pub mod quadratic;
pub mod rational;
pub mod scalar;
pub mod tails;

pub use interval::Interval;
pub use point::Point;
pub use quadratic::QuadraticIrrational;
pub use rational::Rational;
pub use scalar::ExactScalar;
pub use tails::{shifted_tail_bounds, shifted_tail_enclosure, weight_tail_bound, DyadicSum, Weight};

use std::cmp::Ordering;

/// Enclosure of `x` with width at most `width_cap`.
pub fn refine_enclosure(x: &QuadraticIrrational, width_cap: &Rational) -> Interval<Rational> {
    x.refine(width_cap)
}

/// Exact order of `x` versus `r`; never `Equal`.
pub fn compare_point(x: &QuadraticIrrational, r: &Rational) -> Ordering {
    x.cmp_rational(r)
}
