//! Independent re-check of the inequalities the construction relies on.

use crate::enumeration::{Denumeration, Side};
use crate::evaluator::slot_range;
use crate::evaluator::window::add_progression_range;
use crate::exact::rational::{self, Rational};
use crate::exact::{shifted_tail_bounds, shifted_tail_enclosure, DyadicSum, Interval, Point, QuadraticIrrational, Weight};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt::Write as _;

/// Exact terms summed before the sandwich when re-checking tails.
const TAIL_PREFIX: u64 = 32;

const Q_CAP: u64 = 64;
const DELTA_CAP: u32 = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterMargins {
    pub k: usize,
    pub a: u64,
    pub b: u64,
    pub d: u64,
    pub m: u64,
    pub y: Rational,
    /// Lower bound on `δ_k` computed by this module.
    pub delta_lb: Rational,
    /// `(L/2 − y)² − c y`; positive implies `y + √(c y) < δ/2`.
    pub margin_32: Rational,
    /// `c_{k−1} y_{k−1} − 2 c_k y_k`, absent for `k = 1`.
    pub margin_33: Option<Rational>,
    /// `2 c y − max(tail_a, tail_b)` with sharpened tail bounds.
    pub margin_34: Rational,
    /// `(m, s, ratio enclosure)` samples of the tail asymptotics.
    pub ratio_samples: Vec<(u64, u64, Interval<Rational>)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClaimSummary {
    pub grid_limit: u64,
    pub pairs_checked: u64,
    /// Pairs with `I_{m,k} ≠ ∅`, where the implication is not vacuous.
    pub nonempty: u64,
    pub violations: Vec<(usize, usize, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionReport {
    pub fingerprint: String,
    pub clusters: Vec<ClusterMargins>,
    pub claim_35: ClaimSummary,
}

impl ConstructionReport {
    pub fn passed(&self) -> bool {
        self.claim_35.violations.is_empty()
            && self.clusters.iter().all(|c| {
                c.margin_32.is_positive()
                    && c.margin_34.is_positive()
                    && c.margin_33.as_ref().is_none_or(|m| m.is_positive())
            })
    }

    /// Key-value blocks with exact rationals.
    pub fn to_text(&self) -> String {
        let f = rational::format_exact;
        let mut out = String::new();
        let _ = writeln!(out, "[construction]");
        let _ = writeln!(out, "fingerprint = {}", self.fingerprint);
        let _ = writeln!(out, "points = {}", self.clusters.len());
        let _ = writeln!(out, "passed = {}", self.passed());
        for c in &self.clusters {
            let _ = writeln!(out, "\n[k = {}]", c.k);
            let _ = writeln!(out, "a = {}\nb = {}\nd = {}\nm = {}", c.a, c.b, c.d, c.m);
            let _ = writeln!(out, "y = {}", f(&c.y));
            let _ = writeln!(out, "delta_lb = {}", f(&c.delta_lb));
            let _ = writeln!(out, "margin_32 = {}", f(&c.margin_32));
            match &c.margin_33 {
                Some(m) => {
                    let _ = writeln!(out, "margin_33 = {}", f(m));
                }
                None => {
                    let _ = writeln!(out, "margin_33 = none");
                }
            }
            let _ = writeln!(out, "margin_34 = {}", f(&c.margin_34));
            for (m, s, e) in &c.ratio_samples {
                let _ = writeln!(out, "ratio_31 s={s} m={m} = [{}, {}]", f(e.lo()), f(e.hi()));
            }
        }
        let cl = &self.claim_35;
        let _ = writeln!(out, "\n[claim_35]");
        let _ = writeln!(out, "grid_limit = {}", cl.grid_limit);
        let _ = writeln!(out, "pairs_checked = {}", cl.pairs_checked);
        let _ = writeln!(out, "nonempty = {}", cl.nonempty);
        let _ = writeln!(out, "violations = {}", cl.violations.len());
        for (kappa, k, m) in &cl.violations {
            let _ = writeln!(out, "violation = kappa {kappa} k {k} m {m}");
        }
        out
    }
}

/// `|a − b|` with a certified enclosure narrower than `width`, exact when
/// the two share a radicand.
enum Distance {
    Exact(Point),
    Enclosed(Interval<Rational>),
}

fn distance(a: &QuadraticIrrational, b: &QuadraticIrrational) -> Distance {
    if a.w() == b.w() {
        let du = a.u() - b.u();
        let dv = a.v() - b.v();
        if dv.is_zero() {
            return Distance::Exact(Point::Rational(du.abs()));
        }
        let q = QuadraticIrrational::new(du, dv, a.w()).expect("nonzero radical part");
        let q = if q.is_positive() { q } else { q.neg() };
        return Distance::Exact(Point::Irrational(q));
    }
    let mut cap = rational::rat(1, 1 << 20);
    loop {
        let e = a.refine(&cap) - b.refine(&cap);
        if e.lo().is_positive() {
            return Distance::Enclosed(e);
        }
        if e.hi().is_negative() {
            return Distance::Enclosed(-e);
        }
        cap = &cap * &cap;
    }
}

/// `cmp(|a − b|, r)`; never `Equal` unless the distance is rational.
fn cmp_distance(dist: &Distance, a: &QuadraticIrrational, b: &QuadraticIrrational, r: &Rational) -> Ordering {
    match dist {
        Distance::Exact(p) => p.cmp_rational(r),
        Distance::Enclosed(e) => {
            if e.hi() < r {
                return Ordering::Less;
            }
            if e.lo() > r {
                return Ordering::Greater;
            }
            // Sum of two independent radicals: refine until separated.
            let mut cap = e.width() / rational::int(1 << 16);
            loop {
                let f = a.refine(&cap) - b.refine(&cap);
                let f = if f.lo().is_negative() && f.hi().is_negative() { -f } else { f };
                if f.hi() < r {
                    return Ordering::Less;
                }
                if f.lo() > r {
                    return Ordering::Greater;
                }
                cap = &cap * &cap;
            }
        }
    }
}

fn distance_lower_bound(dist: &Distance) -> Rational {
    match dist {
        Distance::Exact(Point::Rational(r)) => r.clone(),
        Distance::Exact(Point::Irrational(q)) => {
            let mut cap = rational::rat(1, 1 << 16);
            loop {
                let e = q.refine(&cap);
                if e.lo().is_positive() {
                    return e.lo().clone();
                }
                cap = &cap * &cap;
            }
        }
        Distance::Enclosed(e) => e.lo().clone(),
    }
}

/// Encloses `Σ_{n≥m}(s+nd)^-2 / (c_k x_m^{(k)})` with the plain sandwich.
pub fn ratio_31(denum: &Denumeration, k: usize, s: u64, m: u64) -> Interval<Rational> {
    let cl = denum.params().cluster(k);
    let cx = &denum.prescription().point(k).c * denum.grid(k, &BigUint::from(m));
    shifted_tail_bounds(s, cl.d, &BigUint::from(m)).div_scalar(&cx)
}

/// Recomputes every construction inequality and checks the claim that a
/// later cluster meeting the window `[ξ_κ − x_m, ξ_κ + x_m]` has
/// `c_k y_k ≤ x_m²`, for all `m ≤ grid_limit`.
pub fn check_construction(denum: &Denumeration, grid_limit: u64) -> ConstructionReport {
    let pres = denum.prescription();
    let params = denum.params();
    let mut clusters = Vec::with_capacity(params.len());
    for cl in &params.clusters {
        let k = cl.k;
        let point = pres.point(k);
        let delta_lb = if k == 1 {
            Rational::one()
        } else {
            (1..k)
                .map(|i| distance_lower_bound(&distance(&pres.point(i).xi, &point.xi)))
                .min()
                .expect("k ≥ 2")
        };
        // Recompute y from scratch rather than trusting the stored value.
        let y = Rational::one() / (&point.c * rational::int(cl.d * cl.d) * rational::int(cl.m));
        let cy = &point.c * &y;
        let gap = &delta_lb / rational::int(2) - &y;
        let margin_32 = if gap.is_positive() {
            &gap * &gap - &cy
        } else {
            gap
        };
        let margin_33 = (k >= 2).then(|| {
            let prev = params.cluster(k - 1);
            let prev_c = &pres.point(k - 1).c;
            let prev_y = Rational::one() / (prev_c * rational::int(prev.d * prev.d) * rational::int(prev.m));
            prev_c * prev_y - rational::int(2) * &cy
        });
        let m = BigUint::from(cl.m);
        let tail_a = shifted_tail_enclosure(cl.a, cl.d, &m, TAIL_PREFIX);
        let tail_b = shifted_tail_enclosure(cl.b, cl.d, &m, TAIL_PREFIX);
        let worst = tail_a.hi().max(tail_b.hi()).clone();
        let margin_34 = rational::int(2) * &cy - worst;
        let ratio_samples = [10u64, 100, 1000]
            .iter()
            .flat_map(|&mm| [(mm, cl.a), (mm, cl.b)])
            .map(|(mm, s)| (mm, s, ratio_31(denum, k, s, mm)))
            .collect();
        clusters.push(ClusterMargins {
            k,
            a: cl.a,
            b: cl.b,
            d: cl.d,
            m: cl.m,
            y,
            delta_lb,
            margin_32,
            margin_33,
            margin_34,
            ratio_samples,
        });
    }

    let mut claim = ClaimSummary {
        grid_limit,
        ..ClaimSummary::default()
    };
    for kappa in 1..=params.len() {
        for k in kappa + 1..=params.len() {
            let (xk, xkappa) = (&pres.point(k).xi, &pres.point(kappa).xi);
            let dist = distance(xk, xkappa);
            let y_k = &clusters[k - 1].y;
            let cy_k = &pres.point(k).c * y_k;
            for m in 1..=grid_limit {
                claim.pairs_checked += 1;
                let x_m = denum.grid(kappa, &BigUint::from(m));
                // Intervals meet iff |ξ_k − ξ_κ| ≤ y_k + x_m.
                let reach = y_k + &x_m;
                if cmp_distance(&dist, xk, xkappa, &reach) == Ordering::Greater {
                    continue;
                }
                claim.nonempty += 1;
                if cy_k > &x_m * &x_m {
                    claim.violations.push((kappa, k, m));
                }
            }
        }
    }

    ConstructionReport {
        fingerprint: pres.fingerprint(),
        clusters,
        claim_35: claim,
    }
}

/// Cross-cluster and encoded contributions to the quotient at `ξ_κ`.
///
/// `cross` encloses `(1/x_m) Σ_{k≠κ}` of the slot weights of cluster `k` in
/// `[ξ_κ − x_m, ξ_κ + x_m)`. `encoded` bounds `(1/x_m)` times the encoded mass
/// there, using that a fraction `p/q` with `q ≥ κ` in the window has
/// `δ(p/q) ≥ 1/x_m`.
pub fn diagnostics_367(denum: &Denumeration, kappa: usize, m: u64) -> (Interval<Rational>, Rational) {
    let point = denum.prescription().point(kappa);
    let x_m = denum.grid(kappa, &BigUint::from(m));
    let lo = Point::Irrational(point.xi.offset(&-&x_m));
    let hi = Point::Irrational(point.xi.offset(&x_m));

    let budget = &x_m * &x_m / rational::int(1000);
    let bits = rational::bits_for(&budget) + 16;
    let mut acc = DyadicSum::new(bits);
    for cl in &denum.params().clusters {
        if cl.k == kappa {
            continue;
        }
        for side in Side::BOTH {
            if let Some((from, to)) = slot_range(denum, cl.k, side, &lo, &hi) {
                let s = match side {
                    Side::Plus => cl.a,
                    Side::Minus => cl.b,
                };
                add_progression_range(&mut acc, Weight::InverseSquare, s, cl.d, &from, to.as_ref(), &budget);
            }
        }
    }
    let cross = acc.enclosure().div_scalar(&x_m);

    // Least denominator with a fraction in the window, or a lower bound for
    // it. Exponents are capped: any smaller q or δ still bounds from above.
    let mut q_min = 2u64;
    while q_min < Q_CAP {
        let qr = rational::int(q_min);
        if lo.scale(&qr).ceil() < hi.scale(&qr).ceil() {
            break;
        }
        q_min += 1;
    }
    let big_delta = rational::ceil(&(Rational::one() / &x_m)).min(BigInt::from(DELTA_CAP));
    let width = rational::int(2) * &x_m;
    // (2 q x_m + 1) fractions with denominator q, each with index
    // ≥ 3·5^q·7^δ, δ ≥ 1/x_m once q ≥ κ.
    let term = |q: u64, delta: &BigInt| -> Rational {
        let count = &width * rational::int(q) + rational::int(1);
        let delta: u32 = delta.try_into().expect("capped exponent");
        let den = BigInt::from(9u32) * BigInt::from(25u32).pow(q as u32) * BigInt::from(49u32).pow(delta);
        count / rational::int(den)
    };
    let q0 = q_min.max(kappa as u64);
    let mut bound = Rational::zero();
    for q in q_min..q0 {
        bound += term(q, &BigInt::one());
    }
    bound += term(q0, &big_delta) * rational::rat(25, 23);
    (cross.clamp_below(&Rational::zero()), bound / &x_m)
}
