//! An independent denumeration of ℚ: `0`, then the Calkin–Wilf sequence of
//! positive rationals interleaved with their negatives.

use super::Denumerate;
use crate::exact::rational::Rational;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `φ(1) = 0`, `φ(2j) = cw(j)`, `φ(2j+1) = −cw(j)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CalkinWilf;

/// `j`-th term of the Calkin–Wilf sequence (breadth-first tree order, `j ≥ 1`).
pub fn cw(j: &BigUint) -> Rational {
    assert!(!j.is_zero());
    let (mut a, mut b) = (BigInt::one(), BigInt::one());
    for i in (0..j.bits() - 1).rev() {
        if j.bit(i) {
            a += &b;
        } else {
            b += &a;
        }
    }
    Rational::new(a, b)
}

/// Position of a positive rational in the Calkin–Wilf sequence.
pub fn cw_index(r: &Rational) -> BigUint {
    assert!(r.is_positive());
    let (mut a, mut b) = (r.numer().magnitude().clone(), r.denom().magnitude().clone());
    // Collect path bits from the leaf upward as runs: each Euclid step
    // contributes a run of identical bits.
    let mut runs: Vec<(bool, BigUint)> = Vec::new();
    while !(a.is_one() && b.is_one()) {
        if a > b {
            let (q, rem) = a.div_rem(&b);
            let (steps, next) = if rem.is_zero() { (q - 1u32, b.clone()) } else { (q, rem) };
            runs.push((true, steps));
            a = next;
        } else {
            let (q, rem) = b.div_rem(&a);
            let (steps, next) = if rem.is_zero() { (q - 1u32, a.clone()) } else { (q, rem) };
            runs.push((false, steps));
            b = next;
        }
    }
    let mut j = BigUint::one();
    for (bit, len) in runs.iter().rev() {
        let len = u64::try_from(len).expect("path run fits u64");
        j <<= len;
        if *bit {
            j += (BigUint::one() << len) - 1u32;
        }
    }
    j
}

impl CalkinWilf {
    pub fn index_of(&self, r: &Rational) -> BigUint {
        if r.is_zero() {
            return BigUint::one();
        }
        let j = cw_index(&r.abs());
        if r.is_positive() {
            j << 1u32
        } else {
            (j << 1u32) + 1u32
        }
    }

    pub fn decode(&self, n: &BigUint) -> Rational {
        assert!(!n.is_zero());
        if n.is_one() {
            return Rational::zero();
        }
        let v = cw(&(n >> 1u32));
        if n.is_odd() {
            -v
        } else {
            v
        }
    }
}

impl Denumerate for CalkinWilf {
    fn name(&self) -> &str {
        "calkin-wilf"
    }

    fn rational_at(&self, n: u64) -> Rational {
        self.decode(&BigUint::from(n))
    }
}
