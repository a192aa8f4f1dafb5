//! Explicit odd indices `13^t · 3^|p| · 5^q · 7^δ(p/q)` for reduced
//! fractions outside the structured domain.

use super::prescription::Prescription;
use crate::error::{Error, Result};
use crate::exact::rational::Rational;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// `δ(p/q)`: the least positive integer `≥ max_{i ≤ min(q, K)} |p/q − ξ_i|^-1`.
///
/// Each reciprocal is again a quadratic irrational, so its floor is exact and
/// the ceiling is that floor plus one.
pub fn fraction_delta(prescription: &Prescription, p: &BigInt, q: &BigUint) -> BigUint {
    let r = Rational::new(p.clone(), BigInt::from(q.clone()));
    let upto = q.to_usize().map_or(prescription.len(), |q| q.min(prescription.len()));
    let mut best = BigUint::zero();
    for point in &prescription.points()[..upto] {
        let diff = point.xi.subtracted_from(&r);
        let inv = diff.recip();
        let inv = if inv.signum() == Ordering::Less { inv.neg() } else { inv };
        let fl = inv.floor().to_biguint().expect("absolute value is nonnegative");
        if fl > best {
            best = fl;
        }
    }
    best + 1u32
}

/// Exponents of an encoded odd index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EncodedIndex {
    /// Numerator is positive (factor 13 present).
    pub positive: bool,
    /// `|p|`
    pub alpha: u64,
    /// `q`
    pub beta: u64,
    /// `δ(p/q)`
    pub gamma: BigUint,
}

impl EncodedIndex {
    pub fn numerator(&self) -> BigInt {
        let a = BigInt::from(self.alpha);
        if self.positive {
            a
        } else {
            -a
        }
    }

    pub fn rational(&self) -> Rational {
        Rational::new(self.numerator(), BigInt::from(self.beta))
    }

    /// The index itself. Can be enormous when `p/q` is close to some `ξ_i`.
    pub fn value(&self) -> BigUint {
        let gamma = self.gamma.to_u32().expect("exponent of 7 exceeds u32");
        let mut n = BigUint::from(3u32).pow(self.alpha as u32)
            * BigUint::from(5u32).pow(self.beta as u32)
            * BigUint::from(7u32).pow(gamma);
        if self.positive {
            n *= 13u32;
        }
        n
    }

    /// Integer `b` with `2^b ≤ value()`, from rational lower bounds on
    /// `log₂ 13, log₂ 3, log₂ 5, log₂ 7`.
    pub fn bits_lower_bound(&self) -> BigUint {
        let t = if self.positive { 3700u32 } else { 0 };
        let milli = BigUint::from(t)
            + BigUint::from(self.alpha) * 1584u32
            + BigUint::from(self.beta) * 2321u32
            + &self.gamma * 2807u32;
        milli / 1000u32
    }
}

/// Index assigned to `p/q` by the explicit formula; the caller is responsible
/// for excluding slot-chosen fractions.
pub fn encode_odd(prescription: &Prescription, p: &BigInt, q: &BigUint) -> Result<EncodedIndex> {
    if q < &BigUint::from(2u32) {
        return Err(Error::InvalidArgument(format!("denominator {q} is below 2")));
    }
    let qi = BigInt::from(q.clone());
    if !p.gcd(&qi).is_one() {
        return Err(Error::InvalidArgument(format!("{p}/{q} is not reduced")));
    }
    let alpha = p
        .magnitude()
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument(format!("numerator {p} too large to encode")))?;
    let beta = q
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument(format!("denominator {q} too large to encode")))?;
    Ok(EncodedIndex {
        positive: p.is_positive(),
        alpha,
        beta,
        gamma: fraction_delta(prescription, p, q),
    })
}

/// Removes every factor `p` from `n`, returning the multiplicity. Large
/// powers are stripped in chunks of `p^16` first.
fn strip_factor(n: &mut BigUint, p: u32) -> BigUint {
    let mut count = BigUint::zero();
    if n.is_zero() {
        return count;
    }
    let chunk = BigUint::from(p).pow(16);
    loop {
        let (q, r) = n.div_rem(&chunk);
        if !r.is_zero() {
            break;
        }
        *n = q;
        count += 16u32;
    }
    let small = BigUint::from(p);
    loop {
        let (q, r) = n.div_rem(&small);
        if !r.is_zero() {
            break;
        }
        *n = q;
        count += 1u32;
    }
    count
}

/// Splits an odd `n` as `13^t 3^α 5^β 7^γ` with `t ∈ {0, 1}`, `α ≥ 1`,
/// `β ≥ 2`, `γ ≥ 1` and nothing else. Only the factorization shape is
/// checked here; coprimality and `γ = δ` are checked by the caller.
pub fn decompose_odd(n: &BigUint) -> Option<EncodedIndex> {
    if n.is_even() || n.is_zero() {
        return None;
    }
    let mut rest = n.clone();
    let t = strip_factor(&mut rest, 13);
    if t > BigUint::one() {
        return None;
    }
    let alpha = strip_factor(&mut rest, 3);
    let beta = strip_factor(&mut rest, 5);
    let gamma = strip_factor(&mut rest, 7);
    if !rest.is_one() || alpha.is_zero() || beta < BigUint::from(2u32) || gamma.is_zero() {
        return None;
    }
    Some(EncodedIndex {
        positive: t.is_one(),
        alpha: alpha.to_u64()?,
        beta: beta.to_u64()?,
        gamma,
    })
}
