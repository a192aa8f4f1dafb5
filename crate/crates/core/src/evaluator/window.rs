//! Value-indexed window sums: every rational in `[lo, hi)` is accounted for
//! through the branch of the construction that produced it.

use crate::enumeration::{encode_odd, Denumeration, Side};
use crate::error::{Error, Result};
use crate::exact::rational::{self, Rational};
use crate::exact::{shifted_tail_bounds, DyadicSum, Interval, Point, QuadraticIrrational, Weight};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug)]
pub struct WindowReport {
    pub lo: Point,
    pub hi: Point,
    pub mass: Interval<Rational>,
    /// Structured indices summed term by term (sandwiched tails excluded).
    pub structured_terms: u64,
    pub encoded_terms: u64,
    pub leftover_terms: u64,
    /// Encoded remainder bound plus terms below the dyadic resolution.
    pub neglected_bound: Rational,
}

/// Enclosure of `t − ξ` of width at most `2^-bits`, exact when the
/// difference is rational.
pub fn offset_enclosure(t: &Point, xi: &QuadraticIrrational, bits: u64) -> Interval<Rational> {
    match t {
        Point::Rational(r) => xi.subtracted_from(r).enclosure_bits(bits),
        Point::Irrational(x) if x.w() == xi.w() => {
            let du = x.u() - xi.u();
            let dv = x.v() - xi.v();
            if dv.is_zero() {
                Interval::point(du)
            } else {
                QuadraticIrrational::new(du, dv, xi.w())
                    .expect("nonzero coefficient on a squarefree radicand")
                    .enclosure_bits(bits)
            }
        }
        Point::Irrational(x) => x.enclosure_bits(bits + 1) - xi.enclosure_bits(bits + 1),
    }
}

/// Smallest `n ≥ m_k` whose slot value is on the far side of `t`: for the
/// plus side the first value `< t`, for the minus side the first value
/// `≥ t`. `None` when no slot qualifies.
pub fn first_crossing(denum: &Denumeration, k: usize, side: Side, t: &Point) -> Option<BigUint> {
    let point = denum.prescription().point(k);
    let xi = &point.xi;
    let m = BigUint::from(denum.params().cluster(k).m);
    let t_vs_xi = t.cmp_irrational(xi);
    match side {
        Side::Plus if t_vs_xi != Ordering::Greater => return None,
        Side::Minus if t_vs_xi != Ordering::Less => return None,
        _ => {}
    }
    let crossed = |n: &BigUint| {
        let v = denum.slot_rational(k, side, n);
        match side {
            Side::Plus => t.cmp_rational(&v) == Ordering::Greater,
            Side::Minus => t.cmp_rational(&v) != Ordering::Greater,
        }
    };
    let d = denum.params().cluster(k).d;
    let cd2 = &point.c * rational::int(d) * rational::int(d);
    let mut bits = 32;
    let (mut lo, hi) = loop {
        let mut e = offset_enclosure(t, xi, bits);
        if side == Side::Minus {
            e = -e;
        }
        if e.lo().is_positive() {
            // x_n ≤ e.lo implies crossed; x_{n+1} ≥ e.hi implies not crossed.
            let sure = rational::ceil(&(Rational::one() / (&cd2 * e.lo())));
            // n < floor(1/(c d² e.hi)) is never crossed.
            let first_open = rational::floor(&(Rational::one() / (&cd2 * e.hi())));
            let hi = sure.to_biguint().unwrap_or_default().max(m.clone());
            let lo = first_open.to_biguint().unwrap_or_default().max(m.clone());
            if &hi - lo.clone().min(hi.clone()) <= BigUint::from(2u32) || bits > 1 << 14 {
                break (lo.min(hi.clone()), hi);
            }
        }
        bits *= 2;
    };
    // Binary search for the least crossed n in [lo, hi]; hi is crossed.
    let mut hi = hi;
    while lo < hi {
        let mid = (&lo + &hi) >> 1u32;
        if crossed(&mid) {
            hi = mid;
        } else {
            lo = mid + 1u32;
        }
    }
    Some(lo)
}

/// Slot numbers of cluster `k`, side `side`, whose values lie in `[lo, hi)`,
/// as a half-open range `[from, to)` with `to = None` for unbounded.
pub fn slot_range(
    denum: &Denumeration,
    k: usize,
    side: Side,
    lo: &Point,
    hi: &Point,
) -> Option<(BigUint, Option<BigUint>)> {
    let m = BigUint::from(denum.params().cluster(k).m);
    let (from, to) = match side {
        // {v < hi} \ {v < lo} with {v < t} = [F(t), ∞)
        Side::Plus => (first_crossing(denum, k, side, hi)?, first_crossing(denum, k, side, lo)),
        // {v < hi} \ {v < lo} with {v < t} = [m, G(t))
        Side::Minus => {
            let from = first_crossing(denum, k, side, lo)?;
            (from, first_crossing(denum, k, side, hi))
        }
    };
    debug_assert!(from >= m);
    match &to {
        Some(to) if to <= &from => None,
        _ => Some((from, to)),
    }
}

/// Adds `Σ_{n ∈ [from, to)} weight(s + n d)` to `acc`, summing exactly up to
/// the point where the sandwich on the rest is narrower than `budget`.
/// Returns the number of explicitly summed terms and whether the range was
/// recorded as a single unit of uncertainty.
pub(crate) fn add_progression_range(
    acc: &mut DyadicSum,
    weight: Weight,
    s: u64,
    d: u64,
    from: &BigUint,
    to: Option<&BigUint>,
    budget: &Rational,
) -> (u64, bool) {
    match weight {
        Weight::InverseSquare => {
            // Sandwich width at M is 1/((s+(M−1)d)(s+Md)) < 1/(s+(M−1)d)²;
            // pick M with s+(M−1)d ≥ √(2/budget).
            let root = rational::sqrt_upper(&(rational::int(2) / budget), 0);
            let need = rational::ceil(&((root - rational::int(s)) / rational::int(d)))
                .to_biguint()
                .unwrap_or_default()
                + 1u32;
            let exact_end = match to {
                Some(to) => to.clone().min(need.max(from.clone())),
                None => need.max(from.clone()),
            };
            let mut n = from.clone();
            let mut count = 0u64;
            while n < exact_end {
                acc.add_inverse_square(&(BigUint::from(s) + &n * d));
                n += 1u32;
                count += 1;
            }
            let rest_done = matches!(to, Some(to) if &n >= to);
            if !rest_done {
                let head = shifted_tail_bounds(s, d, &n);
                let rest = match to {
                    None => head,
                    Some(to) => {
                        let tail = shifted_tail_bounds(s, d, to);
                        Interval::new(
                            (head.lo() - tail.hi()).max(Rational::zero()),
                            head.hi() - tail.lo(),
                        )
                    }
                };
                acc.add_enclosure(&rest);
            }
            (count, false)
        }
        Weight::Binary => {
            let bits = acc.bits();
            let e = BigUint::from(s) + from * d;
            match e.to_u64() {
                Some(e) if e <= bits + 1 => {
                    let ratio = Rational::one() / (Rational::one() - rational::pow2_neg(d));
                    let full = rational::pow2_neg(e) * &ratio;
                    let cut = to.map(|to| ((to - from) * d).to_u64());
                    match cut {
                        Some(Some(c)) if c <= 2 * bits + 2 => {
                            acc.add_rational(&(&full * (Rational::one() - rational::pow2_neg(c))));
                        }
                        None => acc.add_rational(&full),
                        Some(_) => {
                            // Missing part is below 2^{-2·bits}.
                            let slack = rational::pow2_neg(2 * bits);
                            acc.add_enclosure(&Interval::new((&full - slack).max(Rational::zero()), full));
                        }
                    }
                    (0, false)
                }
                // Whole range is below 2^{1−e} ≤ 2^{-bits}.
                _ => {
                    acc.add_unit_uncertainty();
                    (0, true)
                }
            }
        }
    }
}

/// `(q·W + 1)`-count bound on encoded mass with denominator exactly `q`.
fn encoded_term_bound(weight: Weight, q: u64, width: &Rational) -> Rational {
    let count = width * rational::int(q) + rational::int(1);
    match weight {
        // n ≥ 3·5^q·7 gives weight ≤ 1/(441·25^q).
        Weight::InverseSquare => count / (rational::int(441) * rational::int(BigInt::from(25u32).pow(q as u32))),
        // n ≥ 21·5^q gives weight ≤ 2^{-21·5^q}.
        Weight::Binary => {
            let e = BigUint::from(21u32) * BigUint::from(5u32).pow(q as u32);
            match e.to_u64() {
                Some(e) if e < 1 << 20 => count * rational::pow2_neg(e),
                _ => count * rational::pow2_neg(1 << 20),
            }
        }
    }
}

/// Upper bound on encoded mass over all denominators `> q_max`.
fn encoded_remainder(weight: Weight, q_max: u64, width: &Rational) -> Rational {
    let next = encoded_term_bound(weight, q_max + 1, width);
    match weight {
        // Successive bounds shrink by at least 2/25.
        Weight::InverseSquare => next * rational::rat(25, 23),
        Weight::Binary => next * rational::int(2),
    }
}

fn check_tolerance(eps: &Rational) -> Result<()> {
    if eps.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("eps must be positive".into()))
    }
}

/// Certified enclosure of `Σ { weight(n) : lo ≤ φ(n) < hi }`.
pub fn window_mass(
    denum: &Denumeration,
    weight: Weight,
    lo: &Point,
    hi: &Point,
    eps: &Rational,
    scan_limit: &BigUint,
) -> Result<WindowReport> {
    check_tolerance(eps)?;
    if lo.cmp_point(hi) != Ordering::Less {
        return Err(Error::InvalidArgument(format!("empty window [{lo}, {hi})")));
    }
    let quarter = eps / rational::int(4);
    let bits = rational::bits_for(&quarter) + 24;
    let mut acc = DyadicSum::new(bits);
    let ulp = rational::pow2_neg(bits);
    let mut units = 0u64;

    // Structured slots, eps/4 shared across all progressions.
    let k_count = denum.params().len() as u64;
    let per_range = &quarter / rational::int(2 * k_count);
    let mut structured_terms = 0u64;
    for cl in &denum.params().clusters {
        for side in Side::BOTH {
            if let Some((from, to)) = slot_range(denum, cl.k, side, lo, hi) {
                let s = match side {
                    Side::Plus => cl.a,
                    Side::Minus => cl.b,
                };
                let (terms, unit) = add_progression_range(&mut acc, weight, s, cl.d, &from, to.as_ref(), &per_range);
                structured_terms += terms;
                units += u64::from(unit);
            }
        }
    }

    // Encoded fractions p/q, q ≤ q_max, with the rest bounded by eps/4.
    let width_hi = hi.enclosure_bits(64).hi() - lo.enclosure_bits(64).lo();
    let mut q_max = 2u64;
    while encoded_remainder(weight, q_max, &width_hi) > quarter {
        q_max += 1;
    }
    let remainder = encoded_remainder(weight, q_max, &width_hi);
    let mut encoded_terms = 0u64;
    for q in 2..=q_max {
        let qr = rational::int(q);
        let qb = BigUint::from(q);
        let qi = BigInt::from(q);
        let mut p = lo.scale(&qr).ceil();
        let p_end = hi.scale(&qr).ceil();
        while p < p_end {
            if p.gcd(&qi).is_one() {
                let r = Rational::new(p.clone(), qi.clone());
                if !denum.is_slot_chosen(&r) {
                    let e = encode_odd(denum.prescription(), &p, &qb)?;
                    encoded_terms += 1;
                    let lb = e.bits_lower_bound();
                    match weight {
                        Weight::InverseSquare => {
                            if lb * 2u32 > BigUint::from(bits) {
                                acc.add_unit_uncertainty();
                                units += 1;
                            } else {
                                acc.add_inverse_square(&e.value());
                            }
                        }
                        Weight::Binary => {
                            if lb >= BigUint::from(64u32) || lb.to_u64().is_some_and(|b| (1u64 << b) > bits) {
                                acc.add_unit_uncertainty();
                                units += 1;
                            } else {
                                acc.add_pow2_neg(&e.value());
                            }
                        }
                    }
                }
            }
            p += 1;
        }
    }

    // Integers; their indices are leftovers located through index_of.
    let mut leftover_terms = 0u64;
    let mut z = lo.ceil();
    let z_end = hi.ceil();
    while z < z_end {
        let n = denum.index_of(&rational::int(z.clone()), scan_limit)?;
        match weight {
            Weight::InverseSquare => acc.add_inverse_square(&n),
            Weight::Binary => acc.add_pow2_neg(&n),
        }
        leftover_terms += 1;
        z += 1;
    }

    let neglected_bound = &remainder + &ulp * rational::int(units);
    let mass = acc.enclosure().widen_up(&remainder);
    Ok(WindowReport {
        lo: lo.clone(),
        hi: hi.clone(),
        mass,
        structured_terms,
        encoded_terms,
        leftover_terms,
        neglected_bound,
    })
}
