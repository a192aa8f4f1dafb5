//! Slot intervals around each `ξ_k` and the deterministic choice of the
//! rational placed in each of them.

use super::params::{grid_point, ConstructionParams};
use crate::exact::rational::{self, Rational};
use crate::exact::QuadraticIrrational;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Which side of `ξ_k` a slot sits on. `Plus` slots carry the indices
/// `a_k + n d_k`, `Minus` slots the indices `b_k + n d_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Plus, Side::Minus];
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        })
    }
}

/// Open slot interval `(lo, hi)` for slot `n`:
/// plus `(ξ + x_{n+1}, ξ + x_n)`, minus `(ξ − x_n, ξ − x_{n+1})`.
pub fn slot_interval(
    xi: &QuadraticIrrational,
    c: &Rational,
    d: u64,
    side: Side,
    n: &BigUint,
) -> (QuadraticIrrational, QuadraticIrrational) {
    let near = grid_point(c, d, &(n + 1u32));
    let far = grid_point(c, d, n);
    match side {
        Side::Plus => (xi.offset(&near), xi.offset(&far)),
        Side::Minus => (xi.offset(&-far), xi.offset(&-near)),
    }
}

/// The rational `r/p^j` strictly inside `(lo, hi)` with the smallest `j ≥ 1`,
/// then the smallest `|r|` with `p ∤ r`, positive `r` winning ties.
pub fn choose_grid_rational(lo: &QuadraticIrrational, hi: &QuadraticIrrational, p: u64) -> Rational {
    debug_assert!(lo.cmp_irrational(hi).is_lt());
    let big_p = BigInt::from(p);
    let p_bits = 64 - p.leading_zeros() as u64;
    let mut lo_fl = ScaledFloor::new(lo, 128);
    let mut hi_fl = ScaledFloor::new(hi, 128);
    let mut scale = BigInt::one();
    for j in 1u64.. {
        scale *= &big_p;
        if j * p_bits + 32 > lo_fl.bits {
            let bits = 2 * lo_fl.bits;
            lo_fl = ScaledFloor::new(lo, bits);
            hi_fl = ScaledFloor::new(hi, bits);
        }
        // Endpoints times p^j are irrational, so the open range is exactly
        // floor(lo·p^j)+1 ..= floor(hi·p^j).
        let r_lo = lo_fl.floor_times(&scale) + 1;
        let r_hi = hi_fl.floor_times(&scale);
        if r_lo > r_hi {
            continue;
        }
        if let Some(r) = smallest_coprime(&r_lo, &r_hi, &big_p) {
            return Rational::new(r, scale);
        }
    }
    unreachable!()
}

/// `floor(x · s)` for integer `s > 0`, answered from a dyadic enclosure of
/// `x` when it decides the floor and exactly otherwise.
struct ScaledFloor<'a> {
    x: &'a QuadraticIrrational,
    bits: u64,
    below: BigInt,
}

impl<'a> ScaledFloor<'a> {
    fn new(x: &'a QuadraticIrrational, bits: u64) -> Self {
        let below = rational::dyadic_floor(x.enclosure_bits(bits).lo(), bits);
        ScaledFloor { x, bits, below }
    }

    fn floor_times(&self, s: &BigInt) -> BigInt {
        // x ∈ (below, below + 1) / 2^bits
        let a = (&self.below * s) >> self.bits;
        let b = ((&self.below + 1) * s) >> self.bits;
        if a == b {
            a
        } else {
            self.x.scale(&rational::int(s.clone())).floor()
        }
    }
}

/// Element of `[lo, hi]` not divisible by `p`, closest to zero, positive first.
fn smallest_coprime(lo: &BigInt, hi: &BigInt, p: &BigInt) -> Option<BigInt> {
    let ok = |r: &BigInt| !r.is_zero() && !r.is_multiple_of(p);
    if lo.is_positive() {
        let mut r = lo.clone();
        while &r <= hi {
            if ok(&r) {
                return Some(r);
            }
            r += 1;
        }
        return None;
    }
    if hi.is_negative() {
        let mut r = hi.clone();
        while &r >= lo {
            if ok(&r) {
                return Some(r);
            }
            r -= 1;
        }
        return None;
    }
    let reach = hi.clone().max(-lo);
    let mut mag = BigInt::one();
    while mag <= reach {
        if &mag <= hi && ok(&mag) {
            return Some(mag);
        }
        let neg = -&mag;
        if &neg >= lo && ok(&neg) {
            return Some(neg);
        }
        mag += 1;
    }
    None
}

/// 3-adic valuation and cofactor of a positive integer.
fn strip_threes(mut h: BigUint) -> (u32, BigUint) {
    let three = BigUint::from(3u32);
    let mut v = 0;
    while !h.is_zero() && (&h % &three).is_zero() {
        h /= &three;
        v += 1;
    }
    (v, h)
}

/// Structured index `a_k + n d_k` or `b_k + n d_k`.
pub fn structured_index(params: &ConstructionParams, k: usize, side: Side, n: &BigUint) -> BigUint {
    let cl = params.cluster(k);
    let s = match side {
        Side::Plus => cl.a,
        Side::Minus => cl.b,
    };
    BigUint::from(s) + n * cl.d
}

/// Recognizes indices of the structured domain: returns `(k, side, n)` when
/// `index = a_k + n d_k` (plus) or `b_k + n d_k` (minus) with `k ≤ K` and
/// `n ≥ m_k`.
pub fn classify_structured(params: &ConstructionParams, index: &BigUint) -> Option<(usize, Side, BigUint)> {
    if index.is_odd() || index.is_zero() {
        return None;
    }
    let (v, t) = strip_threes(index >> 1u32);
    let k = v as usize;
    if k == 0 || k > params.len() {
        return None;
    }
    let (side, residue) = match (&t % 3u32).to_u32() {
        Some(1) => (Side::Plus, 1u32),
        Some(2) => (Side::Minus, 2u32),
        _ => return None,
    };
    let n = (t - residue) / 3u32;
    if n < BigUint::from(params.cluster(k).m) {
        return None;
    }
    Some((k, side, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::prescription::{Prescription, PrescriptionPoint};
    use crate::exact::rational::rat;

    fn qi(u: i64, w: u64) -> QuadraticIrrational {
        QuadraticIrrational::new(rat(u, 1), rat(1, 1), w).unwrap()
    }

    fn three_point_params() -> ConstructionParams {
        let p = Prescription::new(vec![
            PrescriptionPoint::new(qi(-1, 2), rat(1, 1)),
            PrescriptionPoint::new(qi(-1, 3), rat(2, 1)),
            PrescriptionPoint::new(qi(-2, 5), rat(1, 2)),
        ])
        .unwrap();
        ConstructionParams::build(&p)
    }

    #[test]
    fn slot_example() {
        let xi = qi(-1, 2);
        let (lo, hi) = slot_interval(&xi, &rat(1, 1), 18, Side::Plus, &BigUint::from(2u32));
        assert_eq!(lo, xi.offset(&rat(1, 972)));
        assert_eq!(hi, xi.offset(&rat(1, 648)));
        assert_eq!(choose_grid_rational(&lo, &hi, 2), rat(851, 2048));
    }

    /// Independent search over dyadic grids using decimal enclosures of √2.
    #[test]
    fn slot_example_brute_force() {
        // √2 ∈ (1.41421356237309504, 1.41421356237309505)
        let s_lo = rat(141_421_356_237_309_504, 100_000_000_000_000_000);
        let s_hi = rat(141_421_356_237_309_505, 100_000_000_000_000_000);
        let lo = &s_lo - rat(1, 1) + rat(1, 972);
        let hi = &s_hi - rat(1, 1) + rat(1, 648);
        let mut found = None;
        'outer: for j in 1..=16u32 {
            let den = 1i64 << j;
            for r in (1..den).step_by(2) {
                let x = rat(r, den);
                if x > lo && x < hi {
                    found = Some((j, x));
                    break 'outer;
                }
            }
        }
        assert_eq!(found, Some((11, rat(851, 2048))));
    }

    #[test]
    fn chosen_rational_is_inside_and_reduced() {
        let xi = qi(-1, 3);
        for n in 1u32..60 {
            for side in Side::BOTH {
                let (lo, hi) = slot_interval(&xi, &rat(2, 1), 54, side, &BigUint::from(n));
                let r = choose_grid_rational(&lo, &hi, 3);
                assert!(lo.cmp_rational(&r).is_lt() && hi.cmp_rational(&r).is_gt());
                let den = r.denom().to_u64().unwrap();
                assert!(den >= 3 && 3u64.pow(den.ilog(3)) == den);
                assert!(!r.numer().is_multiple_of(&BigInt::from(3)));
            }
        }
    }

    #[test]
    fn ties_prefer_positive() {
        // Interval around 0 of width > 1: smallest |r| not divisible by 5 is 1.
        let lo = QuadraticIrrational::new(rat(0, 1), rat(-1, 2), 2).unwrap();
        let hi = QuadraticIrrational::new(rat(0, 1), rat(1, 2), 2).unwrap();
        assert_eq!(choose_grid_rational(&lo, &hi, 5), rat(1, 5));
        let lo = QuadraticIrrational::new(rat(0, 1), rat(-1, 1000), 2).unwrap();
        let hi = QuadraticIrrational::new(rat(0, 1), rat(1, 1000), 2).unwrap();
        assert_eq!(choose_grid_rational(&lo, &hi, 2), rat(1, 1024));
    }

    #[test]
    fn classify_roundtrip() {
        let params = three_point_params();
        for k in 1..=3 {
            for side in Side::BOTH {
                for n in params.cluster(k).m..params.cluster(k).m + 40 {
                    let n = BigUint::from(n);
                    let idx = structured_index(&params, k, side, &n);
                    assert_eq!(classify_structured(&params, &idx), Some((k, side, n)));
                }
            }
        }
        assert_eq!(classify_structured(&params, &BigUint::from(42u32)), Some((1, Side::Plus, BigUint::from(2u32))));
        // n = 1 < m₁ = 2 is not structured.
        assert_eq!(classify_structured(&params, &BigUint::from(24u32)), None);
        // k = 4 exceeds K.
        assert_eq!(classify_structured(&params, &BigUint::from(2 * 81 * 7u32)), None);
        assert_eq!(classify_structured(&params, &BigUint::from(43u32)), None);
    }
}
