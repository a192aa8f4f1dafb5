//! Search for a scale at which the windowed binary mass leaves the band a
//! derivative `2^x` at `ξ` would force.

use crate::enumeration::{Denumerate, Side};
use crate::error::{Error, Result};
use crate::exact::rational::{self, Rational};
use crate::exact::{Interval, QuadraticIrrational};
use num_traits::{Pow, Signed, Zero};

/// Extra indices summed beyond the scale so the unsummed tail is at most
/// `2^{x−12}`, far below the band.
const TAIL_MARGIN: i64 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessQuery {
    pub xi: QuadraticIrrational,
    /// The candidate derivative is `2^x_exponent`.
    pub x_exponent: i64,
    pub epsilon: Rational,
    /// First scale searched.
    pub n: u64,
    /// Last scale searched.
    pub m: u64,
}

impl WitnessQuery {
    pub fn new(xi: QuadraticIrrational, x_exponent: i64, epsilon: Rational, n: u64, m: u64) -> Result<Self> {
        if !epsilon.is_positive() || epsilon >= rational::rat(1, 10) {
            return Err(Error::InvalidArgument("epsilon must lie in (0, 1/10)".into()));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("search must start at a positive scale".into()));
        }
        Ok(WitnessQuery { xi, x_exponent, epsilon, n, m })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub m: u64,
    pub side: Side,
    /// Encloses `2^m Σ 2^-n` over the side's window at scale `m`.
    pub enclosure: Interval<Rational>,
}

/// Encloses `2^m Σ_{n : φ(n) ∈ window} 2^-n` for the window
/// `[ξ, ξ + 2^-m)` (plus) or `[ξ − 2^-m, ξ)` (minus), from the prefix `φ(1..=len)`.
fn scaled_window_mass(prefix: &[Rational], xi: &QuadraticIrrational, m: u64, side: Side) -> Interval<Rational> {
    let w = rational::pow2_neg(m);
    let (lo, hi) = match side {
        Side::Plus => (xi.clone(), xi.offset(&w)),
        Side::Minus => (xi.offset(&-w), xi.clone()),
    };
    let mut sum = Rational::zero();
    for (i, r) in prefix.iter().enumerate() {
        if lo.cmp_rational(r).is_le() && hi.cmp_rational(r).is_gt() {
            sum += rational::pow2_neg(i as u64 + 1);
        }
    }
    let scale = rational::int(rational::pow2(m));
    let tail = rational::pow2_neg(prefix.len() as u64);
    Interval::new(&sum * &scale, (sum + tail) * scale)
}

fn pow2_signed(e: i64) -> Rational {
    if e >= 0 {
        rational::int(rational::pow2(e as u64))
    } else {
        rational::pow2_neg(e.unsigned_abs())
    }
}

/// True when the enclosure lies outside the open band `(2^{x−ε}, 2^{x+ε})`:
/// with `ε = a/b`, either `hi^b ≤ 2^{bx−a}` or `lo^b ≥ 2^{bx+a}`.
fn outside_band(e: &Interval<Rational>, x: i64, eps: &Rational) -> bool {
    let a: i64 = eps.numer().try_into().expect("small epsilon numerator");
    let b: u32 = eps.denom().try_into().expect("small epsilon denominator");
    let hi: Rational = Pow::pow(e.hi(), b);
    let lo: Rational = Pow::pow(e.lo(), b);
    hi <= pow2_signed(b as i64 * x - a) || lo >= pow2_signed(b as i64 * x + a)
}

/// Smallest `m ∈ [N, M]` at which the plus or minus window mass is certified
/// outside the band, plus first. `None` when the search is inconclusive.
pub fn proposition_witness(enumeration: &dyn Denumerate, query: &WitnessQuery) -> Option<Witness> {
    if query.m < query.n {
        return None;
    }
    let longest = prefix_len(query.m, query.x_exponent);
    let prefix = enumeration.prefix(longest);
    for m in query.n..=query.m {
        let len = prefix_len(m, query.x_exponent);
        for side in Side::BOTH {
            let e = scaled_window_mass(&prefix[..len], &query.xi, m, side);
            if outside_band(&e, query.x_exponent, &query.epsilon) {
                return Some(Witness { m, side, enclosure: e });
            }
        }
    }
    None
}

fn prefix_len(m: u64, x: i64) -> usize {
    (m as i64 - x + TAIL_MARGIN).max(1) as usize
}

/// True when `2^-μ ≤ Σ_{n∈N} 2^-n ≤ 2^{1−μ}` with `μ = min N`.
pub fn minindex_bounds_check(indices: &std::collections::BTreeSet<u64>) -> bool {
    let Some(&mu) = indices.first() else {
        return false;
    };
    let sum: Rational = indices.iter().map(|&n| rational::pow2_neg(n)).sum();
    let upper = if mu == 0 {
        rational::int(2)
    } else {
        rational::pow2_neg(mu - 1)
    };
    rational::pow2_neg(mu) <= sum && sum <= upper
}
