//! Closed intervals with exact endpoints.

use super::scalar::ExactScalar;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A closed interval `[lo, hi]` certified to contain some real value.
///
/// All arithmetic is exact, so every operation is trivially outward-correct:
/// if `x ∈ a` and `y ∈ b` then `x + y ∈ a + b`, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: ExactScalar> Interval<T> {
    /// Panics if `lo > hi`.
    pub fn new(lo: T, hi: T) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        Interval { lo, hi }
    }

    pub fn try_new(lo: T, hi: T) -> Option<Self> {
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn point(x: T) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Self {
        Self::point(T::zero())
    }

    pub fn lo(&self) -> &T {
        &self.lo
    }

    pub fn hi(&self) -> &T {
        &self.hi
    }

    pub fn into_bounds(self) -> (T, T) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn midpoint(&self) -> T {
        T::midpoint(&self.lo, &self.hi)
    }

    pub fn contains(&self, x: &T) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        Self::try_new(lo, hi)
    }

    pub fn hull(&self, other: &Self) -> Self {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Multiplies by an exact scalar, swapping endpoints for negative factors.
    pub fn scale(&self, k: &T) -> Self {
        let a = self.lo.clone() * k.clone();
        let b = self.hi.clone() * k.clone();
        if k.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    /// Divides by a nonzero exact scalar.
    pub fn div_scalar(&self, k: &T) -> Self {
        assert!(!k.is_zero(), "division of an interval by zero");
        self.scale(&(T::one() / k.clone()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let products = [
            self.lo.clone() * other.lo.clone(),
            self.lo.clone() * other.hi.clone(),
            self.hi.clone() * other.lo.clone(),
            self.hi.clone() * other.hi.clone(),
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        Interval { lo, hi }
    }

    /// Raises the lower endpoint to at least `floor`; used for quantities known
    /// to be nonnegative.
    pub fn clamp_below(&self, floor: &T) -> Self {
        let lo = self.lo.clone().max(floor.clone());
        let hi = self.hi.clone().max(lo.clone());
        Interval { lo, hi }
    }

    /// Extends the upper endpoint by `slack ≥ 0`.
    pub fn widen_up(&self, slack: &T) -> Self {
        Interval {
            lo: self.lo.clone(),
            hi: self.hi.clone() + slack.clone(),
        }
    }
}

impl<T: ExactScalar> Add for Interval<T> {
    type Output = Interval<T>;
    fn add(self, rhs: Self) -> Self {
        Interval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl<'a, T: ExactScalar> Add<&'a Interval<T>> for &'a Interval<T> {
    type Output = Interval<T>;
    fn add(self, rhs: Self) -> Interval<T> {
        self.clone() + rhs.clone()
    }
}

impl<T: ExactScalar> Sub for Interval<T> {
    type Output = Interval<T>;
    fn sub(self, rhs: Self) -> Self {
        Interval {
            lo: self.lo - rhs.hi,
            hi: self.hi - rhs.lo,
        }
    }
}

impl<'a, T: ExactScalar> Sub<&'a Interval<T>> for &'a Interval<T> {
    type Output = Interval<T>;
    fn sub(self, rhs: Self) -> Interval<T> {
        self.clone() - rhs.clone()
    }
}

impl<T: ExactScalar> Neg for Interval<T> {
    type Output = Interval<T>;
    fn neg(self) -> Self {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn iv(a: i64, b: i64, c: i64, d: i64) -> Interval<Q> {
        Interval::new(Q::new(a, b), Q::new(c, d))
    }

    #[test]
    fn arithmetic_keeps_members() {
        let a = iv(1, 3, 1, 2);
        let b = iv(-1, 4, 2, 1);
        let x = Q::new(2, 5);
        let y = Q::new(1, 1);
        assert!((a.clone() + b.clone()).contains(&(x + y)));
        assert!((a.clone() - b.clone()).contains(&(x - y)));
        assert!(a.mul(&b).contains(&(x * y)));
        assert!(a.scale(&Q::new(-3, 2)).contains(&(x * Q::new(-3, 2))));
        assert!((-a).contains(&-x));
    }

    #[test]
    fn set_relations() {
        let a = iv(0, 1, 1, 1);
        let b = iv(1, 2, 3, 1);
        let c = iv(2, 1, 3, 1);
        assert!(a.intersects(&b));
        assert!(!a.intersects(&c));
        assert_eq!(a.intersection(&b), Some(iv(1, 2, 1, 1)));
        assert!(iv(1, 4, 1, 2).is_subset_of(&a));
        assert_eq!(a.hull(&c), iv(0, 1, 3, 1));
        assert_eq!(a.width(), Q::new(1, 1));
        assert_eq!(a.midpoint(), Q::new(1, 2));
    }

    #[test]
    fn clamp_below_zero() {
        let a = iv(-1, 2, 1, 3);
        assert_eq!(a.clamp_below(&Q::new(0, 1)), iv(0, 1, 1, 3));
        let b = iv(-2, 1, -1, 1);
        assert_eq!(b.clamp_below(&Q::new(0, 1)), iv(0, 1, 0, 1));
    }

    #[test]
    #[should_panic]
    fn reversed_endpoints_panic() {
        let _ = iv(1, 1, 0, 1);
    }
}
