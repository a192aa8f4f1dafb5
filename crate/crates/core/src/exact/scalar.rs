//! Scalar abstraction for exact ordered fields.
//!
//! Certified enclosures only make sense over a field with exact arithmetic and
//! a total order, so there is deliberately no float implementation. The crate
//! uses [`BigRational`](num_rational::BigRational) everywhere; fixed-width ratios
//! such as `Ratio<i64>` also satisfy the bound and are handy in tests.

use num_traits::{Num, Signed};
use std::fmt::Debug;

/// An exact, totally ordered field element.
pub trait ExactScalar: Num + Signed + Clone + Ord + Debug {
    /// Midpoint of `a` and `b`.
    fn midpoint(a: &Self, b: &Self) -> Self {
        let two = Self::one() + Self::one();
        (a.clone() + b.clone()) / two
    }
}

impl<T> ExactScalar for T where T: Num + Signed + Clone + Ord + Debug {}
